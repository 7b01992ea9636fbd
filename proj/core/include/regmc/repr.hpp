#pragma once

#include "regmc/automaton.hpp"
#include "regmc/eqlogic.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace regmc
{

// Entry of a representative matrix: the registers differ (zero), are equal
// to each other but to no constant (one), or are both equal to constant c.
struct MatrixEntry
{
    enum class Kind : std::uint8_t
    {
        zero,
        one,
        constant
    };

    Kind kind = Kind::zero;
    Symbol symbol = 0;

    static MatrixEntry zero() { return { Kind::zero, 0 }; }
    static MatrixEntry one() { return { Kind::one, 0 }; }
    static MatrixEntry constant( Symbol c ) { return { Kind::constant, c }; }

    [[nodiscard]] bool is_zero() const { return kind == Kind::zero; }
    [[nodiscard]] bool is_constant() const { return kind == Kind::constant; }

    friend auto operator<=>( const MatrixEntry&, const MatrixEntry& ) = default;
};

std::string to_string( const MatrixEntry& e );

// Square |X| x |X| matrix over {0, 1} + C. Arbitrary matrices can be built;
// only consistent ones name a class of valuations.
class RepMatrix
{
    std::size_t _n = 0;
    std::vector< MatrixEntry > _entries;

public:
    RepMatrix() = default;
    explicit RepMatrix( std::size_t n ) : _n{ n }, _entries( n * n, MatrixEntry::zero() ) {}
    RepMatrix( std::initializer_list< std::initializer_list< MatrixEntry > > rows );

    [[nodiscard]] std::size_t size() const { return _n; }
    [[nodiscard]] const MatrixEntry& at( std::size_t i, std::size_t j ) const { return _entries[ i * _n + j ]; }
    void set( std::size_t i, std::size_t j, MatrixEntry e ) { _entries[ i * _n + j ] = e; }
    // Sets (i, j) and (j, i).
    void set_symmetric( std::size_t i, std::size_t j, MatrixEntry e )
    {
        set( i, j, e );
        set( j, i, e );
    }
    [[nodiscard]] const std::vector< MatrixEntry >& entries() const { return _entries; }

    [[nodiscard]] std::size_t hash() const;

    friend auto operator<=>( const RepMatrix&, const RepMatrix& ) = default;
};

struct RepConfig
{
    LocationId location = 0;
    RepMatrix matrix;

    friend auto operator<=>( const RepConfig&, const RepConfig& ) = default;
};

// Equivalence classes of a consistent matrix: blocks ordered by their first
// register, registers ascending within each block, and the constant each
// block equals (if any).
struct RegisterClasses
{
    std::vector< std::vector< RegisterIndex > > blocks;
    std::vector< std::optional< Symbol > > labels;

    friend bool operator==( const RegisterClasses&, const RegisterClasses& ) = default;
};

RepMatrix matrix_of_valuation( std::span< const Symbol > v, const ConstantSet& constants );

// u ~C v. Throws UsageError when lengths differ.
bool equivalent( std::span< const Symbol > u, std::span< const Symbol > v, const ConstantSet& constants );

// E(R): the conjunction over all entries (i, j), both orders and the
// diagonal included.
ConstraintSystem formula_E_of_matrix( const RepMatrix& r, const ConstantSet& constants );

// E(v), or E'(v) over primed registers. Besides the pairwise (dis)equalities
// between registers (i < j) and x = c for constant-valued registers, every
// register whose value is not a constant is asserted distinct from each
// constant; without these atoms E(v) would not pin down [v] when C is
// nonempty.
ConstraintSystem formula_E_of_valuation( std::span< const Symbol > v, const ConstantSet& constants,
                                         bool primed );

// E(pi): x'_k = e for every binding.
ConstraintSystem formula_E_of_assignment( const Assignment& pi );

// E(R) is consistent (and every constant entry belongs to C).
bool is_consistent_matrix( const RepMatrix& r, const ConstantSet& constants );

// Direct check of the structural invariants of representative matrices:
// symmetry, diagonal in {1} + C, transitivity and constant coherence.
bool has_representative_shape( const RepMatrix& r, const ConstantSet& constants );

// Algorithm CanonicalVal. Fresh symbols are the smallest naturals >= 1 not in
// C. Throws PreconditionError on an inconsistent matrix.
Valuation canonical_valuation( const RepMatrix& r, const ConstantSet& constants );

RegisterClasses classes_of( const RepMatrix& r );
RepMatrix matrix_of_classes( std::size_t n, const RegisterClasses& classes );

// Every consistent n x n matrix, in canonical order: set partitions of the
// registers as restricted-growth strings in lexicographic order, then for
// each partition the injective partial maps from blocks to constants (per
// block: no constant first, then constants ascending).
std::vector< RepMatrix > universe( std::size_t n_registers, const ConstantSet& constants );

// Literal scan over all (|C| + 2)^(n^2) matrices keeping the consistent ones.
// Throws UsageError when the scan exceeds `max_candidates`.
std::vector< RepMatrix > literal_universe( std::size_t n_registers, const ConstantSet& constants,
                                           std::uint64_t max_candidates = 50'000'000 );

// Sum over k of S(n, k) times the number of injective partial maps from k
// blocks into C.
std::uint64_t universe_size( std::size_t n_registers, std::size_t n_constants );

// Class notation such as `{x1 x2} {x3=0}`; every block is printed.
std::string to_class_notation( const RepMatrix& r, const std::vector< std::string >& register_names );
std::vector< std::string > default_register_names( std::size_t n );

} // namespace regmc

template <>
struct std::hash< regmc::RepMatrix >
{
    std::size_t operator()( const regmc::RepMatrix& m ) const noexcept { return m.hash(); }
};

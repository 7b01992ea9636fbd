#pragma once

#include "regmc/automaton.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace regmc
{

// A variable of the conjunctive equality logic: a register x, a primed
// register x' (its value after a step), an action parameter p or a constant.
struct Var
{
    enum class Kind : std::uint8_t
    {
        reg,
        primed,
        param,
        constant
    };

    Kind kind = Kind::reg;
    std::uint32_t value = 0; // register index, parameter number (1-based) or symbol

    static Var reg( RegisterIndex i ) { return { Kind::reg, static_cast< std::uint32_t >( i ) }; }
    static Var primed( RegisterIndex i ) { return { Kind::primed, static_cast< std::uint32_t >( i ) }; }
    static Var param( std::size_t j ) { return { Kind::param, static_cast< std::uint32_t >( j ) }; }
    static Var constant( Symbol c ) { return { Kind::constant, c }; }

    // Lifts a guard/assignment term. Registers become x (or x' when primed).
    static Var of_term( const Term& t, bool primed = false );

    friend auto operator<=>( const Var&, const Var& ) = default;
};

std::string to_string( const Var& v );

struct Atom
{
    Var lhs;
    Var rhs;
    Polarity polarity = Polarity::eq;

    static Atom eq( Var a, Var b ) { return { a, b, Polarity::eq }; }
    static Atom neq( Var a, Var b ) { return { a, b, Polarity::neq }; }

    [[nodiscard]] Atom negated() const
    {
        return { lhs, rhs, polarity == Polarity::eq ? Polarity::neq : Polarity::eq };
    }

    friend auto operator<=>( const Atom&, const Atom& ) = default;
};

std::string to_string( const Atom& a );

// A conjunction of equalities and disequalities. Atoms are kept in insertion
// order; no simplification is performed.
class ConstraintSystem
{
    std::set< Var > _universe;
    std::vector< Atom > _atoms;

public:
    ConstraintSystem() = default;

    void add( const Atom& a );
    void add( const ConstraintSystem& other );
    void add_var( const Var& v ) { _universe.insert( v ); }

    [[nodiscard]] const std::set< Var >& universe() const { return _universe; }
    [[nodiscard]] const std::vector< Atom >& atoms() const { return _atoms; }
    [[nodiscard]] std::vector< Atom > equalities() const;
    [[nodiscard]] std::vector< Atom > disequalities() const;
    [[nodiscard]] bool contains( const Atom& a ) const;
    [[nodiscard]] std::size_t size() const { return _atoms.size(); }

    friend bool operator==( const ConstraintSystem&, const ConstraintSystem& ) = default;
};

ConstraintSystem conjoin( ConstraintSystem s, const Atom& a );
ConstraintSystem conjoin( ConstraintSystem s, const ConstraintSystem& t );

// Satisfiable over the naturals, with each constant interpreted as itself.
bool is_consistent( const ConstraintSystem& s );

// Every model of s satisfies a. Inconsistent systems entail everything.
bool entails( const ConstraintSystem& s, const Atom& a );

// Union-find over densely numbered variables with disequality bookkeeping.
// Variables may be tagged with the constant they denote; merging classes
// tagged with distinct constants is a conflict.
class EqualityClosure
{
    std::vector< std::uint32_t > _parent;
    std::vector< std::uint32_t > _rank;
    std::vector< std::optional< Symbol > > _constant; // valid at roots
    std::vector< std::pair< std::uint32_t, std::uint32_t > > _disequalities;
    bool _conflict = false;

public:
    EqualityClosure() = default;
    explicit EqualityClosure( std::size_t vars ) { reset( vars ); }

    void reset( std::size_t vars );
    std::uint32_t add_var();

    void tag_constant( std::uint32_t v, Symbol c );
    void merge( std::uint32_t a, std::uint32_t b );
    void separate( std::uint32_t a, std::uint32_t b ) { _disequalities.emplace_back( a, b ); }

    [[nodiscard]] std::uint32_t find( std::uint32_t v ) const;
    [[nodiscard]] std::optional< Symbol > constant_of( std::uint32_t v ) const { return _constant[ find( v ) ]; }
    [[nodiscard]] std::size_t var_count() const { return _parent.size(); }
    [[nodiscard]] const std::vector< std::pair< std::uint32_t, std::uint32_t > >& disequalities() const
    {
        return _disequalities;
    }

    // No merged pair of distinct constants and no disequality inside a class.
    [[nodiscard]] bool consistent() const;
};

} // namespace regmc

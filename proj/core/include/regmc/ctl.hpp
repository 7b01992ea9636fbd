#pragma once

#include "regmc/reach.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace regmc
{

// CTL over register equalities and locations. Only the core connectives are
// represented; the derived ones are expanded on construction.
class CtlFormula
{
public:
    enum class Kind : std::uint8_t
    {
        at_location,
        reg_eq,
        reg_eq_const,
        negation,
        conjunction,
        ex,
        eu,
        eg
    };

private:
    struct Node;
    std::shared_ptr< const Node > _node;

    explicit CtlFormula( std::shared_ptr< const Node > node ) : _node{ std::move( node ) } {}
    static CtlFormula make( Kind kind, std::size_t a, std::size_t b, Symbol c, std::vector< CtlFormula > operands );

public:
    static CtlFormula at_location( LocationId l );
    static CtlFormula reg_eq( RegisterIndex i, RegisterIndex j );
    static CtlFormula reg_eq_const( RegisterIndex i, Symbol c );
    static CtlFormula negation( CtlFormula f );
    static CtlFormula conjunction( CtlFormula f, CtlFormula g );
    static CtlFormula ex( CtlFormula f );
    static CtlFormula eu( CtlFormula f, CtlFormula g );
    static CtlFormula eg( CtlFormula f );

    // false = !(x1 = x1), true = !false, and the usual dualities.
    static CtlFormula falsum();
    static CtlFormula verum();
    static CtlFormula disjunction( CtlFormula f, CtlFormula g );
    static CtlFormula implication( CtlFormula f, CtlFormula g );
    static CtlFormula ax( CtlFormula f );
    static CtlFormula ef( CtlFormula f );
    static CtlFormula ag( CtlFormula f );
    static CtlFormula af( CtlFormula f );

    [[nodiscard]] Kind kind() const;
    [[nodiscard]] bool is_atomic() const;
    [[nodiscard]] LocationId location() const;
    [[nodiscard]] RegisterIndex lhs_register() const;
    [[nodiscard]] RegisterIndex rhs_register() const;
    [[nodiscard]] Symbol constant() const;
    [[nodiscard]] const std::vector< CtlFormula >& operands() const;
    [[nodiscard]] std::size_t hash() const;
    [[nodiscard]] std::size_t depth() const;

    friend bool operator==( const CtlFormula& a, const CtlFormula& b );
};

// Throws UsageError if f mentions registers, constants or locations the
// automaton does not have.
void validate_formula( const CtlFormula& f, const RegisterAutomaton& ra );

// A set of quotient-graph nodes.
class LabelSet
{
    std::size_t _size = 0;
    std::vector< std::uint64_t > _words;

public:
    LabelSet() = default;
    explicit LabelSet( std::size_t universe_size, bool full = false );

    [[nodiscard]] std::size_t universe_size() const { return _size; }
    [[nodiscard]] bool contains( NodeId n ) const { return ( _words[ n >> 6 ] >> ( n & 63 ) ) & 1u; }
    void insert( NodeId n ) { _words[ n >> 6 ] |= std::uint64_t{ 1 } << ( n & 63 ); }
    void erase( NodeId n ) { _words[ n >> 6 ] &= ~( std::uint64_t{ 1 } << ( n & 63 ) ); }
    [[nodiscard]] std::size_t count() const;
    [[nodiscard]] bool empty() const { return count() == 0; }
    [[nodiscard]] bool is_subset_of( const LabelSet& other ) const;
    [[nodiscard]] std::vector< NodeId > nodes() const;

    LabelSet& operator&=( const LabelSet& other );
    LabelSet& operator|=( const LabelSet& other );
    [[nodiscard]] LabelSet complement() const;

    friend bool operator==( const LabelSet&, const LabelSet& ) = default;
};

LabelSet compute_ap( const QuotientGraph& graph, const CtlFormula& atom );
LabelSet compute_not( const QuotientGraph& graph, const LabelSet& s );
LabelSet compute_and( const LabelSet& s0, const LabelSet& s1 );
LabelSet compute_ex( const QuotientGraph& graph, const LabelSet& s );

// Least fixpoint of Z = s1 | (s0 & EX Z). When `iterates` is given, every
// intermediate U is appended to it.
LabelSet compute_eu( const QuotientGraph& graph, const LabelSet& s0, const LabelSet& s1,
                     std::vector< LabelSet >* iterates = nullptr );

// Greatest fixpoint of Z = s & EX Z, starting from U = s.
LabelSet compute_eg( const QuotientGraph& graph, const LabelSet& s, std::vector< LabelSet >* iterates = nullptr );

// Bottom-up labelling; structurally equal subformulas are computed once.
LabelSet compute_ctl( const QuotientGraph& graph, const CtlFormula& f );

// Every initial representative configuration satisfies f.
bool model_check( const QuotientGraph& graph, const CtlFormula& f );

} // namespace regmc

template <>
struct std::hash< regmc::CtlFormula >
{
    std::size_t operator()( const regmc::CtlFormula& f ) const noexcept { return f.hash(); }
};

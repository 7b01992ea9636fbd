#pragma once

#include "regmc/error.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace regmc
{

// Elements of the infinite alphabet are modelled as natural numbers.
using Symbol = std::uint32_t;

using LocationId = std::size_t;
using RegisterIndex = std::size_t;
using ActionId = std::size_t;

// A valuation assigns one symbol to every register, in register order.
using Valuation = std::vector< Symbol >;

class ConstantSet
{
    std::vector< Symbol > _symbols; // sorted, unique

public:
    ConstantSet() = default;
    ConstantSet( std::initializer_list< Symbol > symbols );
    explicit ConstantSet( std::vector< Symbol > symbols );

    [[nodiscard]] bool contains( Symbol s ) const;
    [[nodiscard]] std::size_t size() const { return _symbols.size(); }
    [[nodiscard]] bool empty() const { return _symbols.empty(); }
    [[nodiscard]] const std::vector< Symbol >& symbols() const { return _symbols; }
    [[nodiscard]] auto begin() const { return _symbols.begin(); }
    [[nodiscard]] auto end() const { return _symbols.end(); }

    // Position of s in ascending order; s must be a member.
    [[nodiscard]] std::size_t index_of( Symbol s ) const;

    // The i-th smallest natural number >= 1 that is not a constant (i is
    // 0-based). These are the fresh symbols used by canonical valuations.
    [[nodiscard]] Symbol fresh( std::size_t i ) const;

    friend bool operator==( const ConstantSet&, const ConstantSet& ) = default;
};

struct Action
{
    std::string name;
    std::size_t arity = 0;

    friend bool operator==( const Action&, const Action& ) = default;
};

// An operand of a guard or assignment: a register, a formal parameter of the
// transition's action (1-based, as in p1 .. pn) or a constant.
struct Term
{
    enum class Kind : std::uint8_t
    {
        reg,
        param,
        constant
    };

    Kind kind = Kind::reg;
    std::size_t index = 0; // register index, or parameter number for params
    Symbol symbol = 0;     // only meaningful for constants

    static Term reg( RegisterIndex i ) { return { Kind::reg, i, 0 }; }
    static Term param( std::size_t i ) { return { Kind::param, i, 0 }; }
    static Term constant( Symbol c ) { return { Kind::constant, 0, c }; }

    friend auto operator<=>( const Term&, const Term& ) = default;
};

enum class Polarity : std::uint8_t
{
    eq,
    neq
};

struct GuardAtom
{
    Term lhs;
    Term rhs;
    Polarity polarity = Polarity::eq;

    friend auto operator<=>( const GuardAtom&, const GuardAtom& ) = default;
};

// Conjunction of atomic guards; the empty conjunction is true.
struct Guard
{
    std::vector< GuardAtom > atoms;

    friend bool operator==( const Guard&, const Guard& ) = default;
};

// Simultaneous assignment x_k1, ..., x_kn := e_1, ..., e_n. Registers that are
// not bound may take arbitrary values after the step (havoc semantics).
struct Assignment
{
    std::vector< std::pair< RegisterIndex, Term > > bindings;

    friend bool operator==( const Assignment&, const Assignment& ) = default;
};

struct Transition
{
    LocationId source = 0;
    ActionId action = 0;
    Guard guard;
    Assignment assignment;
    LocationId target = 0;

    friend bool operator==( const Transition&, const Transition& ) = default;
};

struct Configuration
{
    LocationId location = 0;
    Valuation valuation;

    friend auto operator<=>( const Configuration&, const Configuration& ) = default;
};

struct DataSymbol
{
    ActionId action = 0;
    std::vector< Symbol > args;

    friend bool operator==( const DataSymbol&, const DataSymbol& ) = default;
};

class RegisterAutomaton
{
    std::vector< Action > _actions;
    std::vector< std::string > _registers;
    std::vector< std::string > _locations;
    LocationId _initial = 0;
    std::vector< Transition > _transitions;
    ConstantSet _constants;

    // _outgoing[l] lists indices into _transitions with source l
    std::vector< std::vector< std::size_t > > _outgoing;

    void validate() const;

public:
    // Throws MalformedError when any structural invariant is violated.
    RegisterAutomaton( std::vector< Action > actions, std::vector< std::string > registers,
                       std::vector< std::string > locations, LocationId initial,
                       std::vector< Transition > transitions, ConstantSet constants );

    [[nodiscard]] const std::vector< Action >& actions() const { return _actions; }
    [[nodiscard]] const std::vector< std::string >& registers() const { return _registers; }
    [[nodiscard]] const std::vector< std::string >& locations() const { return _locations; }
    [[nodiscard]] LocationId initial() const { return _initial; }
    [[nodiscard]] const std::vector< Transition >& transitions() const { return _transitions; }
    [[nodiscard]] const ConstantSet& constants() const { return _constants; }

    [[nodiscard]] std::size_t register_count() const { return _registers.size(); }
    [[nodiscard]] std::size_t location_count() const { return _locations.size(); }
    [[nodiscard]] std::size_t max_arity() const;

    [[nodiscard]] const std::vector< std::size_t >& outgoing( LocationId l ) const { return _outgoing.at( l ); }

    // Lookup by name; return npos-like size_t(-1) when absent.
    [[nodiscard]] std::size_t find_register( const std::string& name ) const;
    [[nodiscard]] std::size_t find_location( const std::string& name ) const;
    [[nodiscard]] std::size_t find_action( const std::string& name ) const;

    static constexpr std::size_t npos = static_cast< std::size_t >( -1 );

    friend bool operator==( const RegisterAutomaton& a, const RegisterAutomaton& b )
    {
        return a._actions == b._actions && a._registers == b._registers && a._locations == b._locations
               && a._initial == b._initial && a._transitions == b._transitions && a._constants == b._constants;
    }
};

// Finite stand-in for the alphabet: C together with the first `fresh_count`
// fresh symbols.
std::vector< Symbol > make_pool( const ConstantSet& constants, std::size_t fresh_count );

// Pool large enough that every abstract successor of a configuration over the
// pool is realised by a concrete successor over the same pool.
std::vector< Symbol > sufficient_pool( const RegisterAutomaton& ra );

Symbol eval_term( const Term& t, std::span< const Symbol > valuation, std::span< const Symbol > args );
bool eval_guard( const Guard& g, std::span< const Symbol > valuation, std::span< const Symbol > args );

// All valuations the assignment may produce when unbound registers range over
// `pool`.
std::set< Valuation > apply_assignment( const Assignment& pi, std::span< const Symbol > valuation,
                                        std::span< const Symbol > args, std::span< const Symbol > pool );

// One-step successors where data-symbol arguments and havoc values are drawn
// from `pool`.
std::set< Configuration > concrete_successors( const RegisterAutomaton& ra, const Configuration& c,
                                               std::span< const Symbol > pool );

// Does `from` transit to `to` on `symbol`?
bool transits( const RegisterAutomaton& ra, const Configuration& from, const DataSymbol& symbol,
               const Configuration& to );

// Throws UsageError unless run.size() == word.size() + 1.
bool check_run( const RegisterAutomaton& ra, std::span< const DataSymbol > word,
                std::span< const Configuration > run );

} // namespace regmc

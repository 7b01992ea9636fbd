#pragma once

#include "regmc/ctl.hpp"
#include "regmc/repr.hpp"

#include <random>
#include <string>
#include <vector>

namespace regmc::testing
{

using Rng = std::mt19937_64;

struct RandomShape
{
    std::size_t max_registers = 3;
    std::size_t max_locations = 3;
    std::size_t max_transitions = 5;
    std::size_t max_arity = 2;
    std::size_t max_constants = 1;
    std::size_t max_guard_atoms = 3;
};

inline std::size_t pick( Rng& rng, std::size_t lo, std::size_t hi )
{
    return std::uniform_int_distribution< std::size_t >( lo, hi )( rng );
}

inline bool coin( Rng& rng, double p = 0.5 ) { return std::bernoulli_distribution( p )( rng ); }

inline Term random_term( Rng& rng, std::size_t registers, std::size_t arity, const ConstantSet& constants )
{
    for ( ;; )
    {
        switch ( pick( rng, 0, 2 ) )
        {
        case 0:
            return Term::reg( pick( rng, 0, registers - 1 ) );
        case 1:
            if ( arity > 0 )
                return Term::param( pick( rng, 1, arity ) );
            break;
        default:
            if ( !constants.empty() )
                return Term::constant( constants.symbols()[ pick( rng, 0, constants.size() - 1 ) ] );
        }
    }
}

inline RegisterAutomaton random_automaton( Rng& rng, const RandomShape& shape = {} )
{
    const std::size_t n = pick( rng, 1, shape.max_registers );
    const std::size_t locations = pick( rng, 1, shape.max_locations );
    const std::size_t n_constants = pick( rng, 0, shape.max_constants );

    std::vector< Symbol > symbols;
    while ( symbols.size() < n_constants )
    {
        const auto c = static_cast< Symbol >( pick( rng, 0, 4 ) );
        if ( std::find( symbols.begin(), symbols.end(), c ) == symbols.end() )
            symbols.push_back( c );
    }
    const ConstantSet constants( symbols );

    std::vector< Action > actions;
    const std::size_t n_actions = pick( rng, 1, 2 );
    for ( std::size_t a = 0; a < n_actions; ++a )
        actions.push_back( { "a" + std::to_string( a ), pick( rng, 0, shape.max_arity ) } );

    std::vector< std::string > registers;
    for ( std::size_t i = 0; i < n; ++i )
        registers.push_back( "x" + std::to_string( i + 1 ) );
    std::vector< std::string > names;
    for ( std::size_t l = 0; l < locations; ++l )
        names.push_back( "l" + std::to_string( l ) );

    std::vector< Transition > transitions;
    const std::size_t n_transitions = pick( rng, 0, shape.max_transitions );
    for ( std::size_t k = 0; k < n_transitions; ++k )
    {
        Transition tr;
        tr.source = pick( rng, 0, locations - 1 );
        tr.target = pick( rng, 0, locations - 1 );
        tr.action = pick( rng, 0, actions.size() - 1 );
        const std::size_t arity = actions[ tr.action ].arity;
        const std::size_t atoms = pick( rng, 0, shape.max_guard_atoms );
        for ( std::size_t i = 0; i < atoms; ++i )
            tr.guard.atoms.push_back( { random_term( rng, n, arity, constants ), random_term( rng, n, arity, constants ),
                                        coin( rng ) ? Polarity::eq : Polarity::neq } );
        for ( RegisterIndex r = 0; r < n; ++r )
            if ( coin( rng, 0.6 ) )
                tr.assignment.bindings.emplace_back( r, random_term( rng, n, arity, constants ) );
        std::shuffle( tr.assignment.bindings.begin(), tr.assignment.bindings.end(), rng );
        transitions.push_back( std::move( tr ) );
    }
    return RegisterAutomaton( std::move( actions ), std::move( registers ), std::move( names ),
                              pick( rng, 0, locations - 1 ), std::move( transitions ), constants );
}

// Uses every connective, the derived ones included.
inline CtlFormula random_formula( Rng& rng, const RegisterAutomaton& ra, std::size_t depth )
{
    const std::size_t n = ra.register_count();
    if ( depth == 0 || coin( rng, 0.2 ) )
    {
        switch ( pick( rng, 0, 3 ) )
        {
        case 0:
            return CtlFormula::at_location( pick( rng, 0, ra.location_count() - 1 ) );
        case 1:
            if ( !ra.constants().empty() )
                return CtlFormula::reg_eq_const( pick( rng, 0, n - 1 ),
                                                 ra.constants().symbols()[ pick( rng, 0, ra.constants().size() - 1 ) ] );
            [[fallthrough]];
        case 2:
            return CtlFormula::reg_eq( pick( rng, 0, n - 1 ), pick( rng, 0, n - 1 ) );
        default:
            return coin( rng ) ? CtlFormula::verum() : CtlFormula::falsum();
        }
    }
    auto sub = [ & ] { return random_formula( rng, ra, depth - 1 ); };
    switch ( pick( rng, 0, 12 ) )
    {
    case 0:
        return CtlFormula::negation( sub() );
    case 1:
        return CtlFormula::conjunction( sub(), sub() );
    case 2:
        return CtlFormula::disjunction( sub(), sub() );
    case 3:
        return CtlFormula::implication( sub(), sub() );
    case 4:
        return CtlFormula::ex( sub() );
    case 5:
        return CtlFormula::ax( sub() );
    case 6:
        return CtlFormula::eu( sub(), sub() );
    case 7:
        return CtlFormula::ef( sub() );
    case 8:
        return CtlFormula::af( sub() );
    case 9:
        return CtlFormula::ag( sub() );
    default:
        return CtlFormula::eg( sub() );
    }
}

// Pool size |C| + |X| + max arity + 1, matching the sufficiency bound.
inline std::vector< Symbol > oracle_pool( const RegisterAutomaton& ra )
{
    return make_pool( ra.constants(), ra.register_count() + ra.max_arity() + 1 );
}

} // namespace regmc::testing

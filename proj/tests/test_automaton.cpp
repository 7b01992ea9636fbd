#include "support/fixtures.hpp"
#include "support/random_instances.hpp"

#include <doctest.h>

using namespace regmc;
using namespace regmc::testing;

namespace
{

const RegisterAutomaton& two_register()
{
    static const RegisterAutomaton ra = load_automaton( "two_register.ra" );
    return ra;
}

Guard guard_of( std::initializer_list< GuardAtom > atoms ) { return Guard{ std::vector< GuardAtom >( atoms ) }; }

} // namespace

TEST_CASE( "constant sets" )
{
    const ConstantSet c{ 5, 2 };
    CHECK( c.symbols() == std::vector< Symbol >{ 2, 5 } );
    CHECK( c.contains( 5 ) );
    CHECK_FALSE( c.contains( 3 ) );
    CHECK( c.index_of( 5 ) == 1 );
    CHECK_THROWS_AS( ConstantSet( { 1, 1 } ), MalformedError );
    CHECK( c.fresh( 0 ) == 1 );
    CHECK( c.fresh( 1 ) == 3 );
    CHECK( c.fresh( 2 ) == 4 );
    CHECK( c.fresh( 3 ) == 6 );
    CHECK( ConstantSet{}.fresh( 0 ) == 1 );
}

TEST_CASE( "eval_term" )
{
    const Valuation v{ 7, 7 };
    CHECK( eval_term( Term::reg( 0 ), v, {} ) == 7 );
    const std::vector< Symbol > args{ 1, 3 };
    CHECK( eval_term( Term::param( 2 ), Valuation{ 1, 3 }, args ) == 3 );
    CHECK( eval_term( Term::constant( 2 ), v, {} ) == 2 );
    CHECK_THROWS_AS( eval_term( Term::param( 3 ), v, args ), MalformedError );
}

TEST_CASE( "eval_guard" )
{
    const std::vector< Symbol > args{ 1, 3 };
    CHECK( eval_guard( guard_of( { { Term::param( 1 ), Term::param( 2 ), Polarity::neq } } ), Valuation{ 7, 7 }, args ) );
    const std::vector< Symbol > one{ 1 };
    CHECK( eval_guard( guard_of( { { Term::reg( 0 ), Term::param( 1 ), Polarity::eq } } ), Valuation{ 1, 3 }, one ) );
    CHECK( eval_guard( Guard{}, Valuation{ 4, 4 }, {} ) );
    CHECK_FALSE( eval_guard( guard_of( { { Term::reg( 0 ), Term::reg( 1 ), Polarity::neq } } ), Valuation{ 4, 4 }, {} ) );
}

TEST_CASE( "apply_assignment" )
{
    const std::vector< Symbol > pool13{ 1, 3 };
    CHECK( apply_assignment( Assignment{}, Valuation{ 1, 3 }, {}, pool13 )
           == std::set< Valuation >{ { 1, 1 }, { 1, 3 }, { 3, 1 }, { 3, 3 } } );

    Assignment pi;
    pi.bindings = { { 0, Term::param( 1 ) }, { 1, Term::param( 2 ) } };
    const std::vector< Symbol > args{ 1, 3 };
    const std::vector< Symbol > pool{ 1, 2, 3, 7, 9 };
    CHECK( apply_assignment( pi, Valuation{ 7, 7 }, args, pool ) == std::set< Valuation >{ { 1, 3 } } );

    const std::vector< Symbol > pool69{ 6, 9 };
    const std::vector< Symbol > arg1{ 1 };
    CHECK( apply_assignment( Assignment{}, Valuation{ 1, 3 }, arg1, pool69 ).contains( Valuation{ 6, 9 } ) );
}

TEST_CASE( "a fully binding assignment yields one valuation for any pool" )
{
    Rng rng( 11 );
    for ( int i = 0; i < 200; ++i )
    {
        const std::size_t n = pick( rng, 1, 4 );
        Assignment pi;
        for ( RegisterIndex r = 0; r < n; ++r )
            pi.bindings.emplace_back( r, coin( rng ) ? Term::reg( pick( rng, 0, n - 1 ) ) : Term::param( 1 ) );
        Valuation v( n );
        for ( auto& s : v )
            s = static_cast< Symbol >( pick( rng, 0, 9 ) );
        const std::vector< Symbol > args{ static_cast< Symbol >( pick( rng, 0, 9 ) ) };
        const std::vector< Symbol > pool = make_pool( ConstantSet{}, pick( rng, 1, 6 ) );
        CHECK( apply_assignment( pi, v, args, pool ).size() == 1 );
    }
}

TEST_CASE( "concrete_successors on the two-register example" )
{
    const auto& ra = two_register();
    const std::vector< Symbol > pool{ 1, 2, 3, 7 };
    CHECK( concrete_successors( ra, { 0, { 7, 7 } }, pool ).contains( Configuration{ 1, { 1, 3 } } ) );
    const std::vector< Symbol > pool123{ 1, 2, 3 };
    CHECK( concrete_successors( ra, { 1, { 1, 3 } }, pool123 ).contains( Configuration{ 1, { 2, 3 } } ) );

    const RegisterAutomaton dead( { { "a", 0 } }, { "x" }, { "l0", "l1" }, 0, {}, ConstantSet{} );
    CHECK( concrete_successors( dead, { 0, { 1 } }, pool ).empty() );
}

TEST_CASE( "concrete_successors is monotone in the pool" )
{
    Rng rng( 12 );
    for ( int i = 0; i < 100; ++i )
    {
        const RegisterAutomaton ra = random_automaton( rng );
        const auto small = make_pool( ra.constants(), 2 );
        const auto large = make_pool( ra.constants(), 4 );
        Configuration c{ pick( rng, 0, ra.location_count() - 1 ), Valuation( ra.register_count() ) };
        for ( auto& s : c.valuation )
            s = small[ pick( rng, 0, small.size() - 1 ) ];
        const auto a = concrete_successors( ra, c, small );
        const auto b = concrete_successors( ra, c, large );
        CHECK( std::includes( b.begin(), b.end(), a.begin(), a.end() ) );
    }
}

TEST_CASE( "check_run on the example run" )
{
    const auto& ra = two_register();
    const ActionId alpha = ra.find_action( "alpha" );
    const ActionId beta = ra.find_action( "beta" );
    const std::vector< DataSymbol > word{ { alpha, { 1, 3 } }, { beta, { 1 } }, { beta, { 2 } }, { beta, { 1 } } };
    std::vector< Configuration > run{ { 0, { 7, 7 } }, { 1, { 1, 3 } }, { 1, { 1, 3 } }, { 1, { 2, 3 } }, { 0, { 6, 9 } } };
    CHECK( check_run( ra, word, run ) );

    CHECK( check_run( ra, std::vector< DataSymbol >{}, std::vector< Configuration >{ { 0, { 5, 8 } } } ) );
    CHECK_FALSE( check_run( ra, std::vector< DataSymbol >{}, std::vector< Configuration >{ { 1, { 5, 8 } } } ) );

    run.back() = { 1, { 6, 9 } };
    CHECK_FALSE( check_run( ra, word, run ) );

    run.pop_back();
    CHECK_THROWS_AS( check_run( ra, word, run ), UsageError );
}

TEST_CASE( "automaton invariants are enforced" )
{
    const std::vector< Action > actions{ { "a", 1 } };
    Transition bad_param;
    bad_param.guard.atoms.push_back( { Term::param( 2 ), Term::reg( 0 ), Polarity::eq } );
    CHECK_THROWS_AS( RegisterAutomaton( actions, { "x" }, { "l" }, 0, { bad_param }, ConstantSet{} ), MalformedError );

    Transition bad_const;
    bad_const.assignment.bindings.emplace_back( 0, Term::constant( 4 ) );
    CHECK_THROWS_AS( RegisterAutomaton( actions, { "x" }, { "l" }, 0, { bad_const }, ConstantSet{ 3 } ), MalformedError );

    Transition twice;
    twice.assignment.bindings = { { 0, Term::reg( 0 ) }, { 0, Term::param( 1 ) } };
    CHECK_THROWS_AS( RegisterAutomaton( actions, { "x" }, { "l" }, 0, { twice }, ConstantSet{} ), MalformedError );

    Transition bad_target;
    bad_target.target = 3;
    CHECK_THROWS_AS( RegisterAutomaton( actions, { "x" }, { "l" }, 0, { bad_target }, ConstantSet{} ), MalformedError );

    CHECK_THROWS_AS( RegisterAutomaton( actions, { "x", "x" }, { "l" }, 0, {}, ConstantSet{} ), MalformedError );
    CHECK_THROWS_AS( RegisterAutomaton( actions, { "x" }, { "l" }, 1, {}, ConstantSet{} ), MalformedError );
    CHECK_THROWS_AS( RegisterAutomaton( actions, {}, { "l" }, 0, {}, ConstantSet{} ), MalformedError );
}

TEST_CASE( "sufficient pool" )
{
    const auto& ra = two_register();
    const auto pool = sufficient_pool( ra );
    // C = {2} plus |X| + max arity + 1 = 5 fresh symbols
    CHECK( pool == std::vector< Symbol >{ 1, 2, 3, 4, 5, 6 } );
}

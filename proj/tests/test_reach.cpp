#include "oracle/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/random_instances.hpp"

#include <doctest.h>

#include <deque>
#include <set>

using namespace regmc;
using namespace regmc::testing;

namespace
{

const MatrixEntry O = MatrixEntry::one();
const MatrixEntry Z = MatrixEntry::zero();

const RegisterAutomaton& two_register()
{
    static const RegisterAutomaton ra = load_automaton( "two_register.ra" );
    return ra;
}

RegisterAutomaton without_transitions( const RegisterAutomaton& ra )
{
    return RegisterAutomaton( ra.actions(), ra.registers(), ra.locations(), ra.initial(), {}, ra.constants() );
}

// Classes of every configuration reachable by concrete steps over the pool,
// starting from all valuations at the initial location.
std::set< RepConfig > concrete_reachable( const RegisterAutomaton& ra, std::span< const Symbol > pool )
{
    const oracle::ConcreteGraph g = oracle::concrete_graph( ra, pool );
    std::vector< bool > seen( g.nodes.size(), false );
    std::deque< std::size_t > queue;
    for ( std::size_t i = 0; i < g.nodes.size(); ++i )
        if ( g.nodes[ i ].location == ra.initial() )
        {
            seen[ i ] = true;
            queue.push_back( i );
        }
    while ( !queue.empty() )
    {
        const std::size_t i = queue.front();
        queue.pop_front();
        for ( std::size_t j : g.successors[ i ] )
            if ( !seen[ j ] )
            {
                seen[ j ] = true;
                queue.push_back( j );
            }
    }
    std::set< RepConfig > out;
    for ( std::size_t i = 0; i < g.nodes.size(); ++i )
        if ( seen[ i ] )
            out.insert( { g.nodes[ i ].location, matrix_of_valuation( g.nodes[ i ].valuation, ra.constants() ) } );
    return out;
}

} // namespace

TEST_CASE( "post on the three-register example" )
{
    const RegisterAutomaton ra = load_automaton( "post_example.ra" );
    const RepConfig c{ 0, RepMatrix{ { O, Z, Z }, { Z, O, O }, { Z, O, O } } };
    const auto succ = post( ra, c );
    const std::vector< RepConfig > expected{ { 1, RepMatrix{ { O, O, Z }, { O, O, Z }, { Z, Z, O } } },
                                             { 1, RepMatrix{ { O, Z, O }, { Z, O, Z }, { O, Z, O } } },
                                             { 1, RepMatrix{ { O, Z, Z }, { Z, O, Z }, { Z, Z, O } } } };
    for ( const auto& e : expected )
        CHECK( std::find( succ.begin(), succ.end(), e ) != succ.end() );
    // x2' = p1 and x3' = p2 with p1 != p2
    CHECK( succ.size() == 3 );
    for ( const auto& s : succ )
        CHECK( s.matrix.at( 1, 2 ).is_zero() );
    CHECK( literal_post( ra, c ) == succ );

    // the guard x1 != x2 fails when all registers agree
    CHECK( post( ra, { 0, RepMatrix{ { O, O, O }, { O, O, O }, { O, O, O } } } ).empty() );
    // no outgoing transitions at the target location
    CHECK( post( ra, { 1, c.matrix } ).empty() );
}

TEST_CASE( "post rejects inconsistent matrices" )
{
    CHECK_THROWS_AS( post( two_register(), { 0, RepMatrix{ { Z, Z }, { Z, Z } } } ), PreconditionError );
    CHECK_THROWS_AS( literal_post( two_register(), { 0, RepMatrix{ { Z, Z }, { Z, Z } } } ), PreconditionError );
    CHECK_THROWS_AS( reach( two_register(), { 0, RepMatrix{ { Z, Z }, { Z, Z } } } ), PreconditionError );
}

TEST_CASE( "pruned post matches the literal scan" )
{
    Rng rng( 41 );
    RandomShape shape;
    shape.max_constants = 2;
    for ( int i = 0; i < 150; ++i )
    {
        const RegisterAutomaton ra = random_automaton( rng, shape );
        for ( LocationId l = 0; l < ra.location_count(); ++l )
            for ( const auto& r : universe( ra.register_count(), ra.constants() ) )
            {
                const RepConfig c{ l, r };
                const auto fast = post( ra, c );
                CHECK( fast == literal_post( ra, c ) );
                for ( const auto& s : fast )
                    CHECK( is_consistent_matrix( s.matrix, ra.constants() ) );
            }
    }
}

TEST_CASE( "post matches concrete successors and larger pools add nothing" )
{
    Rng rng( 42 );
    for ( int i = 0; i < 120; ++i )
    {
        const RegisterAutomaton ra = random_automaton( rng );
        const auto pool = oracle_pool( ra );
        const auto bigger = make_pool( ra.constants(), ra.register_count() + ra.max_arity() + 3 );
        for ( LocationId l = 0; l < ra.location_count(); ++l )
            for ( const auto& r : universe( ra.register_count(), ra.constants() ) )
            {
                const RepConfig c{ l, r };
                const auto fast = post( ra, c );
                const std::set< RepConfig > expected( fast.begin(), fast.end() );
                CHECK( oracle::concrete_post( ra, c, pool ) == expected );
                CHECK( oracle::concrete_post( ra, c, bigger ) == expected );
            }
    }
}

TEST_CASE( "post is insensitive to transitions leaving other locations" )
{
    Rng rng( 43 );
    for ( int i = 0; i < 60; ++i )
    {
        const RegisterAutomaton ra = random_automaton( rng );
        std::vector< Transition > kept;
        for ( const auto& tr : ra.transitions() )
            if ( tr.source == 0 )
                kept.push_back( tr );
        const RegisterAutomaton local( ra.actions(), ra.registers(), ra.locations(), ra.initial(), kept,
                                       ra.constants() );
        for ( const auto& r : universe( ra.register_count(), ra.constants() ) )
            CHECK( post( ra, { 0, r } ) == post( local, { 0, r } ) );
    }
}

TEST_CASE( "quotient graph shape" )
{
    const QuotientGraph g = QuotientGraph::build( two_register() );
    CHECK( g.node_count() == 10 );
    CHECK( g.matrix_count() == 5 );
    for ( NodeId n = 0; n < g.node_count(); ++n )
    {
        const auto succ = g.successors( n );
        std::vector< RepConfig > listed;
        for ( NodeId s : succ )
            listed.push_back( g.config( s ) );
        std::sort( listed.begin(), listed.end() );
        CHECK( listed == post( two_register(), g.config( n ) ) );
        CHECK( g.find( g.config( n ) ) == n );
    }
    CHECK_FALSE( g.find( { 0, RepMatrix{ { Z, Z }, { Z, Z } } } ) );

    const QuotientGraph empty = QuotientGraph::build( without_transitions( two_register() ) );
    CHECK( empty.edge_count() == 0 );
}

TEST_CASE( "quotient graph equals the concrete quotient" )
{
    Rng rng( 44 );
    for ( int i = 0; i < 100; ++i )
    {
        const RegisterAutomaton ra = i == 0 ? two_register() : random_automaton( rng );
        const QuotientGraph g = QuotientGraph::build( ra );
        const oracle::AbstractGraph truth = oracle::concrete_quotient( ra, oracle_pool( ra ) );
        CHECK( truth.nodes.size() == g.node_count() );
        for ( const auto& [ from, succ ] : truth.successors )
        {
            const auto node = g.find( from );
            REQUIRE( node );
            std::set< RepConfig > listed;
            for ( NodeId s : g.successors( *node ) )
                listed.insert( g.config( s ) );
            CHECK( listed == succ );
        }
    }
}

TEST_CASE( "parallel construction gives the same graph" )
{
    Rng rng( 45 );
    for ( int i = 0; i < 20; ++i )
    {
        const RegisterAutomaton ra = random_automaton( rng );
        const QuotientGraph a = QuotientGraph::build( ra, { PostMode::pruned, 0 } );
        const QuotientGraph b = QuotientGraph::build( ra, { PostMode::pruned, 3 } );
        const QuotientGraph c = QuotientGraph::build( ra, { PostMode::literal, 2 } );
        REQUIRE( a.node_count() == b.node_count() );
        for ( NodeId n = 0; n < a.node_count(); ++n )
        {
            const auto sa = a.successors( n );
            const auto sb = b.successors( n );
            const auto sc = c.successors( n );
            CHECK( std::vector< NodeId >( sa.begin(), sa.end() ) == std::vector< NodeId >( sb.begin(), sb.end() ) );
            CHECK( std::vector< NodeId >( sa.begin(), sa.end() ) == std::vector< NodeId >( sc.begin(), sc.end() ) );
        }
    }
}

TEST_CASE( "reach on the two-register example" )
{
    const auto& ra = two_register();
    CHECK( reach( ra, { 1, RepMatrix{ { MatrixEntry::constant( 2 ), Z }, { Z, O } } } ) );
    CHECK( reach( ra, { 0, RepMatrix{ { O, O }, { O, O } } } ) );
    CHECK_FALSE( reach( without_transitions( ra ), { 1, RepMatrix{ { O, Z }, { Z, O } } } ) );

    const auto reachable = reachable_set( ra );
    const std::set< RepConfig > listed( reachable.begin(), reachable.end() );
    const std::vector< Symbol > pool{ 1, 2, 3, 4, 5, 6 };
    CHECK( listed == concrete_reachable( ra, pool ) );
}

TEST_CASE( "reachable set" )
{
    const RegisterAutomaton dead = without_transitions( two_register() );
    const auto r = reachable_set( dead );
    CHECK( r.size() == 5 );
    for ( const auto& c : r )
        CHECK( c.location == 0 );

    Rng rng( 46 );
    for ( int i = 0; i < 80; ++i )
    {
        const RegisterAutomaton ra = random_automaton( rng );
        const auto set = reachable_set( ra );
        const std::set< RepConfig > listed( set.begin(), set.end() );
        CHECK( listed == concrete_reachable( ra, oracle_pool( ra ) ) );

        const QuotientGraph g = QuotientGraph::build( ra );
        const auto nodes = reachable_nodes( g );
        for ( NodeId n = 0; n < g.node_count(); ++n )
        {
            CHECK( nodes[ n ] == listed.contains( g.config( n ) ) );
            CHECK( reach( ra, g.config( n ) ) == nodes[ n ] );
        }
    }
}

#include "regmc/ctl.hpp"
#include "regmc/dsl.hpp"
#include "regmc/reach.hpp"
#include "regmc/repr.hpp"

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

using namespace regmc;

namespace
{

RegisterAutomaton load( const std::string& name )
{
    std::ifstream in( std::string( REGMC_FIXTURES_DIR ) + "/" + name );
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_automaton( buffer.str() );
}

const RegisterAutomaton& byzantine()
{
    static const RegisterAutomaton ra = load( "byzantine.ra" );
    return ra;
}

const QuotientGraph& byzantine_graph()
{
    static const QuotientGraph g = QuotientGraph::build( byzantine() );
    return g;
}

void bm_universe( benchmark::State& state )
{
    const auto n = static_cast< std::size_t >( state.range( 0 ) );
    for ( auto _ : state )
        benchmark::DoNotOptimize( universe( n, ConstantSet{ 0 } ) );
}
BENCHMARK( bm_universe )->DenseRange( 4, 8, 2 )->Unit( benchmark::kMillisecond );

void bm_post( benchmark::State& state )
{
    const auto& ra = byzantine();
    const auto all = universe( ra.register_count(), ra.constants() );
    const PostMode mode = state.range( 0 ) == 0 ? PostMode::pruned : PostMode::literal;
    std::size_t k = 0;
    for ( auto _ : state )
    {
        const RepConfig c{ static_cast< LocationId >( k % ra.location_count() ), all[ ( k * 7919 ) % all.size() ] };
        benchmark::DoNotOptimize( mode == PostMode::pruned ? post( ra, c ) : literal_post( ra, c ) );
        ++k;
    }
}
BENCHMARK( bm_post )->Arg( 0 )->Arg( 1 )->Unit( benchmark::kMicrosecond );

void bm_graph_two_register( benchmark::State& state )
{
    const RegisterAutomaton ra = load( "two_register.ra" );
    for ( auto _ : state )
        benchmark::DoNotOptimize( QuotientGraph::build( ra ) );
}
BENCHMARK( bm_graph_two_register );

void bm_graph_byzantine( benchmark::State& state )
{
    const GraphOptions options{ PostMode::pruned, static_cast< unsigned >( state.range( 0 ) ) };
    for ( auto _ : state )
        benchmark::DoNotOptimize( QuotientGraph::build( byzantine(), options ) );
}
BENCHMARK( bm_graph_byzantine )->Arg( 0 )->Unit( benchmark::kSecond )->Iterations( 1 );

void bm_model_check( benchmark::State& state )
{
    const QuotientGraph& g = byzantine_graph();
    const CtlFormula f = parse_formula( "AF (D1 = D2)", byzantine() );
    for ( auto _ : state )
        benchmark::DoNotOptimize( model_check( g, f ) );
}
BENCHMARK( bm_model_check )->Unit( benchmark::kMillisecond );

} // namespace

BENCHMARK_MAIN();

// regmc: command-line front end.
//
// Exit status: 0 holds / member, 1 fails / non-member, 2 usage or parse error.

#include "regmc/ctl.hpp"
#include "regmc/dsl.hpp"
#include "regmc/reach.hpp"
#include "regmc/repr.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

using namespace regmc;

namespace
{

constexpr int exit_holds = 0;
constexpr int exit_fails = 1;
constexpr int exit_usage = 2;

// Reported on stderr with exit status 2.
struct CliError
{
    std::string message;
};

std::string read_file( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw CliError{ "cannot read " + path };
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

template < typename F >
auto parse_or_fail( const std::string& what, F&& parse )
{
    try
    {
        return parse();
    }
    catch ( const ParseError& e )
    {
        throw CliError{ what + ":" + e.what() };
    }
}

RegisterAutomaton load( const std::string& path )
{
    const std::string text = read_file( path );
    return parse_or_fail( path, [ & ] { return parse_automaton( text ); } );
}

unsigned thread_cap()
{
    const unsigned hw = std::max( 1u, std::thread::hardware_concurrency() );
    const char* env = std::getenv( "REGMC_THREADS" );
    if ( !env || !*env )
        return hw > 1 ? hw : 0;
    char* end = nullptr;
    const unsigned long value = std::strtoul( env, &end, 10 );
    if ( *end != '\0' || value > 4096 )
        throw CliError{ "REGMC_THREADS must be a non-negative integer" };
    return static_cast< unsigned >( value );
}

// Listing order: location, then position in universe().
class CanonicalOrder
{
    std::map< RepMatrix, std::size_t > _rank;

public:
    explicit CanonicalOrder( const RegisterAutomaton& ra )
    {
        const auto all = universe( ra.register_count(), ra.constants() );
        for ( std::size_t i = 0; i < all.size(); ++i )
            _rank.emplace( all[ i ], i );
    }
    void sort( std::vector< RepConfig >& configs ) const
    {
        std::sort( configs.begin(), configs.end(), [ this ]( const RepConfig& a, const RepConfig& b ) {
            return std::pair( a.location, _rank.at( a.matrix ) ) < std::pair( b.location, _rank.at( b.matrix ) );
        } );
    }
};

int cmd_universe( std::size_t n, const std::vector< Symbol >& constant_list, bool oracle )
{
    std::vector< Symbol > sorted = constant_list;
    std::sort( sorted.begin(), sorted.end() );
    sorted.erase( std::unique( sorted.begin(), sorted.end() ), sorted.end() );
    const ConstantSet constants( sorted );
    std::vector< RepMatrix > matrices = universe( n, constants );
    if ( oracle )
    {
        std::vector< RepMatrix > scanned;
        try
        {
            scanned = literal_universe( n, constants );
        }
        catch ( const UsageError& e )
        {
            throw CliError{ e.what() };
        }
        const std::set< RepMatrix > found( scanned.begin(), scanned.end() );
        std::erase_if( matrices, [ & ]( const RepMatrix& r ) { return !found.contains( r ); } );
        if ( matrices.size() != found.size() )
            std::cerr << "warning: the literal scan found matrices outside the canonical enumeration\n";
    }
    const auto names = default_register_names( n );
    std::string out;
    for ( const auto& r : matrices )
        out += to_class_notation( r, names ) + "\n";
    std::cout << out << "count: " << matrices.size() << "\n";
    return exit_holds;
}

int cmd_post( const std::string& file, const std::string& config_text, bool oracle )
{
    const RegisterAutomaton ra = load( file );
    const RepConfig c = parse_or_fail( "config", [ & ] { return parse_repconfig( config_text, ra ); } );
    std::vector< RepConfig > succ = post( ra, c, oracle ? PostMode::literal : PostMode::pruned );
    CanonicalOrder( ra ).sort( succ );
    std::string out;
    for ( const auto& s : succ )
        out += serialize( s, ra ) + "\n";
    std::cout << out;
    return exit_holds;
}

bool literal_reach( const RegisterAutomaton& ra, const RepConfig& target )
{
    std::set< RepConfig > seen;
    std::deque< RepConfig > queue;
    for ( const auto& r : universe( ra.register_count(), ra.constants() ) )
    {
        RepConfig c{ ra.initial(), r };
        if ( seen.insert( c ).second )
            queue.push_back( std::move( c ) );
    }
    while ( !queue.empty() )
    {
        RepConfig c = std::move( queue.front() );
        queue.pop_front();
        if ( c == target )
            return true;
        for ( auto& s : literal_post( ra, c ) )
            if ( seen.insert( s ).second )
                queue.push_back( std::move( s ) );
    }
    return false;
}

int cmd_reach( const std::string& file, const std::string& config_text, bool oracle )
{
    const RegisterAutomaton ra = load( file );
    const RepConfig c = parse_or_fail( "config", [ & ] { return parse_repconfig( config_text, ra ); } );
    const bool found = oracle ? literal_reach( ra, c ) : reach( ra, c );
    std::cout << ( found ? "reachable" : "unreachable" ) << "\n";
    return found ? exit_holds : exit_fails;
}

int cmd_check( const std::string& file, const std::string& formula_text, const std::string& config_text, bool oracle )
{
    const RegisterAutomaton ra = load( file );
    const CtlFormula f = parse_or_fail( "formula", [ & ] { return parse_formula( formula_text, ra ); } );
    std::optional< RepConfig > config;
    if ( !config_text.empty() )
        config = parse_or_fail( "config", [ & ] { return parse_repconfig( config_text, ra ); } );

    GraphOptions options;
    options.mode = oracle ? PostMode::literal : PostMode::pruned;
    options.threads = thread_cap();
    const QuotientGraph graph = QuotientGraph::build( ra, options );
    const LabelSet sat = compute_ctl( graph, f );

    if ( config )
    {
        const bool member = sat.contains( *graph.find( *config ) );
        std::cout << "result: " << ( member ? "member" : "non-member" ) << "\n";
        return member ? exit_holds : exit_fails;
    }

    std::string out;
    std::size_t violations = 0;
    for ( std::size_t k = 0; k < graph.matrix_count(); ++k )
    {
        const NodeId n = graph.node( graph.initial(), k );
        if ( sat.contains( n ) )
            continue;
        ++violations;
        out += serialize( graph.config( n ), ra ) + "\n";
    }
    std::cout << out << "violations: " << violations << "\n"
              << "result: " << ( violations == 0 ? "holds" : "fails" ) << "\n";
    return violations == 0 ? exit_holds : exit_fails;
}

std::string valuation_text( const Valuation& v )
{
    std::string out = "[";
    for ( std::size_t i = 0; i < v.size(); ++i )
        out += ( i > 0 ? " " : "" ) + std::to_string( v[ i ] );
    return out + "]";
}

int cmd_simulate( const std::string& file, std::size_t steps, std::uint64_t seed, std::optional< std::size_t > fresh )
{
    const RegisterAutomaton ra = load( file );
    const std::vector< Symbol > pool =
            make_pool( ra.constants(), fresh.value_or( ra.register_count() + ra.max_arity() + 1 ) );
    if ( pool.empty() )
        throw CliError{ "the symbol pool is empty" };
    std::mt19937_64 rng( seed );
    auto draw = [ & ]( std::size_t bound ) { return std::uniform_int_distribution< std::size_t >( 0, bound - 1 )( rng ); };

    Configuration current{ ra.initial(), Valuation( ra.register_count() ) };
    for ( auto& s : current.valuation )
        s = pool[ draw( pool.size() ) ];

    std::ostringstream out;
    auto print_config = [ & ]( std::size_t step, const Configuration& c ) {
        const RepConfig projection{ c.location, matrix_of_valuation( c.valuation, ra.constants() ) };
        out << "step " << step << ": " << ra.locations()[ c.location ] << " " << valuation_text( c.valuation )
            << " ~ " << serialize( projection, ra ) << "\n";
    };
    print_config( 0, current );

    for ( std::size_t step = 1; step <= steps; ++step )
    {
        // enabled (transition, arguments) pairs over the pool
        std::vector< std::pair< std::size_t, std::vector< Symbol > > > enabled;
        for ( std::size_t t : ra.outgoing( current.location ) )
        {
            const Transition& tr = ra.transitions()[ t ];
            const std::size_t arity = ra.actions()[ tr.action ].arity;
            std::vector< std::size_t > digits( arity, 0 );
            for ( ;; )
            {
                std::vector< Symbol > args( arity );
                for ( std::size_t i = 0; i < arity; ++i )
                    args[ i ] = pool[ digits[ i ] ];
                if ( eval_guard( tr.guard, current.valuation, args ) )
                    enabled.emplace_back( t, std::move( args ) );
                std::size_t k = 0;
                while ( k < arity && ++digits[ k ] == pool.size() )
                    digits[ k++ ] = 0;
                if ( k == arity )
                    break;
            }
        }
        if ( enabled.empty() )
        {
            out << "deadlock\n";
            break;
        }
        const auto& [ t, args ] = enabled[ draw( enabled.size() ) ];
        const Transition& tr = ra.transitions()[ t ];
        Configuration next{ tr.target, Valuation( ra.register_count() ) };
        for ( auto& s : next.valuation )
            s = pool[ draw( pool.size() ) ];
        for ( const auto& [ r, term ] : tr.assignment.bindings )
            next.valuation[ r ] = eval_term( term, current.valuation, args );

        out << "read " << ra.actions()[ tr.action ].name << "(";
        for ( std::size_t i = 0; i < args.size(); ++i )
            out << ( i > 0 ? ", " : "" ) << args[ i ];
        out << ")\n";
        print_config( step, next );
        current = std::move( next );
    }
    std::cout << out.str();
    return exit_holds;
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "Model checking for register automata over an infinite alphabet", "regmc" };
    app.require_subcommand( 1 );
    app.fallthrough();

    bool oracle = false;
    app.add_flag( "--oracle", oracle, "Use the literal universe scan and literal Post" );

    std::size_t registers = 0;
    std::vector< Symbol > constants;
    auto* universe_cmd = app.add_subcommand( "universe", "List every representative matrix" );
    universe_cmd->add_option( "-n,--registers", registers, "Number of registers" )->required()->check(
            CLI::Range( 1, 64 ) );
    universe_cmd->add_option( "-c,--constants", constants, "Constants" );

    std::string file;
    std::string config_text;
    auto* post_cmd = app.add_subcommand( "post", "List the abstract successors of a configuration" );
    post_cmd->add_option( "file", file, "Automaton file" )->required();
    post_cmd->add_option( "config", config_text, "Configuration, e.g. 'l0 | {x1 x2}'" )->required();

    auto* reach_cmd = app.add_subcommand( "reach", "Decide whether a configuration is reachable" );
    reach_cmd->add_option( "file", file, "Automaton file" )->required();
    reach_cmd->add_option( "config", config_text, "Configuration" )->required();

    std::string formula_text;
    auto* check_cmd = app.add_subcommand( "check", "Model check a CTL formula" );
    check_cmd->add_option( "file", file, "Automaton file" )->required();
    check_cmd->add_option( "formula", formula_text, "Formula, e.g. 'AF (D1 = D2)'" )->required();
    check_cmd->add_option( "--config", config_text, "Report membership of this configuration only" );

    std::size_t steps = 10;
    std::uint64_t seed = 0;
    std::optional< std::size_t > fresh;
    auto* simulate_cmd = app.add_subcommand( "simulate", "Print a random concrete run" );
    simulate_cmd->add_option( "file", file, "Automaton file" )->required();
    simulate_cmd->add_option( "--steps", steps, "Number of steps" );
    simulate_cmd->add_option( "--seed", seed, "Random seed" );
    simulate_cmd->add_option( "--pool-size", fresh, "Number of non-constant symbols to draw from" );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError& e )
    {
        if ( e.get_exit_code() == 0 )
            return app.exit( e );
        std::cerr << "regmc: " << e.what() << "\n";
        return exit_usage;
    }

    try
    {
        if ( *universe_cmd )
            return cmd_universe( registers, constants, oracle );
        if ( *post_cmd )
            return cmd_post( file, config_text, oracle );
        if ( *reach_cmd )
            return cmd_reach( file, config_text, oracle );
        if ( *check_cmd )
            return cmd_check( file, formula_text, config_text, oracle );
        if ( *simulate_cmd )
            return cmd_simulate( file, steps, seed, fresh );
    }
    catch ( const CliError& e )
    {
        std::cerr << "regmc: " << e.message << "\n";
        return exit_usage;
    }
    catch ( const Error& e )
    {
        std::cerr << "regmc: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

#pragma once

#include "regmc/dsl.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace regmc::testing
{

inline std::string fixture_path( const std::string& name ) { return std::string( REGMC_FIXTURES_DIR ) + "/" + name; }

inline std::string read_fixture( const std::string& name )
{
    std::ifstream in( fixture_path( name ) );
    if ( !in )
        throw std::runtime_error( "cannot open fixture " + name );
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline RegisterAutomaton load_automaton( const std::string& name ) { return parse_automaton( read_fixture( name ) ); }

} // namespace regmc::testing

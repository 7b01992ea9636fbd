#pragma once

#include "regmc/automaton.hpp"
#include "regmc/repr.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace regmc
{

enum class PostMode
{
    // Enumerate only completions of the register classes forced by the
    // transition constraint.
    pruned,
    // Scan the whole universe per enabled transition (Algorithm Post as
    // printed); exponential, intended for differential testing.
    literal
};

// Abstract successors of a representative configuration, sorted and without
// duplicates. Throws PreconditionError when c.matrix is inconsistent.
std::vector< RepConfig > post( const RegisterAutomaton& ra, const RepConfig& c, PostMode mode = PostMode::pruned );
std::vector< RepConfig > literal_post( const RegisterAutomaton& ra, const RepConfig& c );

using NodeId = std::uint32_t;

struct GraphOptions
{
    PostMode mode = PostMode::pruned;
    // Worker threads for computing Post; 0 computes everything on the
    // calling thread.
    unsigned threads = 0;
};

// The abstract transition relation over L x universe(|X|, C), with Post
// evaluated once per node. Node ids are location * |universe| + matrix index,
// so nodes of one location are contiguous and ordered like universe().
class QuotientGraph
{
    std::size_t _locations = 0;
    LocationId _initial = 0;
    std::vector< std::string > _register_names;
    std::vector< std::string > _location_names;
    ConstantSet _constants;
    std::vector< RepMatrix > _matrices;
    std::unordered_map< std::string, std::uint32_t > _index; // matrix key -> matrix index
    std::vector< std::uint64_t > _offsets;                  // CSR, size node_count() + 1
    std::vector< NodeId > _targets;

    QuotientGraph() = default;

public:
    static QuotientGraph build( const RegisterAutomaton& ra, const GraphOptions& options = {} );

    [[nodiscard]] std::size_t node_count() const { return _locations * _matrices.size(); }
    [[nodiscard]] std::size_t edge_count() const { return _targets.size(); }
    [[nodiscard]] std::size_t location_count() const { return _locations; }
    [[nodiscard]] std::size_t matrix_count() const { return _matrices.size(); }
    [[nodiscard]] LocationId initial() const { return _initial; }
    [[nodiscard]] const std::vector< RepMatrix >& matrices() const { return _matrices; }
    [[nodiscard]] const ConstantSet& constants() const { return _constants; }
    [[nodiscard]] const std::vector< std::string >& register_names() const { return _register_names; }
    [[nodiscard]] const std::vector< std::string >& location_names() const { return _location_names; }

    [[nodiscard]] NodeId node( LocationId l, std::size_t matrix_index ) const
    {
        return static_cast< NodeId >( l * _matrices.size() + matrix_index );
    }
    [[nodiscard]] LocationId location_of( NodeId n ) const { return n / _matrices.size(); }
    [[nodiscard]] const RepMatrix& matrix_of( NodeId n ) const { return _matrices[ n % _matrices.size() ]; }
    [[nodiscard]] RepConfig config( NodeId n ) const { return { location_of( n ), matrix_of( n ) }; }

    // Index of a consistent matrix within matrices(); nullopt otherwise.
    [[nodiscard]] std::optional< std::size_t > matrix_index( const RepMatrix& r ) const;
    [[nodiscard]] std::optional< NodeId > find( const RepConfig& c ) const;

    [[nodiscard]] std::span< const NodeId > successors( NodeId n ) const
    {
        return { _targets.data() + _offsets[ n ], _targets.data() + _offsets[ n + 1 ] };
    }
};

// Least fixpoint of Post from every initial representative configuration.
// Sorted by location, then by universe order.
std::vector< RepConfig > reachable_set( const RegisterAutomaton& ra );
std::vector< bool > reachable_nodes( const QuotientGraph& graph );

// Throws PreconditionError when target.matrix is inconsistent.
bool reach( const RegisterAutomaton& ra, const RepConfig& target );

} // namespace regmc

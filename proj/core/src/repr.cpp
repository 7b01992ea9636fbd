#include "regmc/repr.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace regmc
{

std::string to_string( const MatrixEntry& e )
{
    switch ( e.kind )
    {
    case MatrixEntry::Kind::zero:
        return "0";
    case MatrixEntry::Kind::one:
        return "1";
    case MatrixEntry::Kind::constant:
        return "c" + std::to_string( e.symbol );
    }
    return "?";
}

RepMatrix::RepMatrix( std::initializer_list< std::initializer_list< MatrixEntry > > rows ) : _n{ rows.size() }
{
    _entries.reserve( _n * _n );
    for ( const auto& row : rows )
    {
        if ( row.size() != _n )
            throw UsageError( "matrix rows must have as many entries as there are rows" );
        _entries.insert( _entries.end(), row.begin(), row.end() );
    }
}

std::size_t RepMatrix::hash() const
{
    std::size_t h = _n * 0x9e3779b97f4a7c15ULL;
    for ( const auto& e : _entries )
    {
        const std::size_t word = ( static_cast< std::size_t >( e.symbol ) << 2 ) | static_cast< std::size_t >( e.kind );
        h ^= word + 0x9e3779b97f4a7c15ULL + ( h << 6 ) + ( h >> 2 );
    }
    return h;
}

RepMatrix matrix_of_valuation( std::span< const Symbol > v, const ConstantSet& constants )
{
    const std::size_t n = v.size();
    RepMatrix r( n );
    for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = 0; j < n; ++j )
        {
            if ( v[ i ] != v[ j ] )
                continue;
            r.set( i, j, constants.contains( v[ i ] ) ? MatrixEntry::constant( v[ i ] ) : MatrixEntry::one() );
        }
    return r;
}

bool equivalent( std::span< const Symbol > u, std::span< const Symbol > v, const ConstantSet& constants )
{
    if ( u.size() != v.size() )
        throw UsageError( "valuations over different register sets" );
    return matrix_of_valuation( u, constants ) == matrix_of_valuation( v, constants );
}

ConstraintSystem formula_E_of_matrix( const RepMatrix& r, const ConstantSet& constants )
{
    ConstraintSystem s;
    const std::size_t n = r.size();
    for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = 0; j < n; ++j )
        {
            const MatrixEntry& e = r.at( i, j );
            const Var xi = Var::reg( i );
            const Var xj = Var::reg( j );
            switch ( e.kind )
            {
            case MatrixEntry::Kind::constant:
                s.add( Atom::eq( xi, xj ) );
                s.add( Atom::eq( xi, Var::constant( e.symbol ) ) );
                break;
            case MatrixEntry::Kind::one:
                s.add( Atom::eq( xi, xj ) );
                for ( Symbol c : constants )
                    s.add( Atom::neq( xi, Var::constant( c ) ) );
                break;
            case MatrixEntry::Kind::zero:
                s.add( Atom::neq( xi, xj ) );
                break;
            }
        }
    return s;
}

ConstraintSystem formula_E_of_valuation( std::span< const Symbol > v, const ConstantSet& constants, bool primed )
{
    ConstraintSystem s;
    const std::size_t n = v.size();
    auto var = [ primed ]( std::size_t i ) { return primed ? Var::primed( i ) : Var::reg( i ); };
    for ( std::size_t i = 0; i < n; ++i )
    {
        s.add_var( var( i ) );
        if ( constants.contains( v[ i ] ) )
            s.add( Atom::eq( var( i ), Var::constant( v[ i ] ) ) );
        else
            for ( Symbol c : constants )
                s.add( Atom::neq( var( i ), Var::constant( c ) ) );
    }
    for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = i + 1; j < n; ++j )
            s.add( v[ i ] == v[ j ] ? Atom::eq( var( i ), var( j ) ) : Atom::neq( var( i ), var( j ) ) );
    return s;
}

ConstraintSystem formula_E_of_assignment( const Assignment& pi )
{
    ConstraintSystem s;
    for ( const auto& [ target, term ] : pi.bindings )
        s.add( Atom::eq( Var::primed( target ), Var::of_term( term ) ) );
    return s;
}

namespace
{

bool constants_in_domain( const RepMatrix& r, const ConstantSet& constants )
{
    return std::all_of( r.entries().begin(), r.entries().end(), [ & ]( const MatrixEntry& e ) {
        return !e.is_constant() || constants.contains( e.symbol );
    } );
}

} // namespace

bool is_consistent_matrix( const RepMatrix& r, const ConstantSet& constants )
{
    if ( !constants_in_domain( r, constants ) )
        return false;
    return is_consistent( formula_E_of_matrix( r, constants ) );
}

bool has_representative_shape( const RepMatrix& r, const ConstantSet& constants )
{
    if ( !constants_in_domain( r, constants ) )
        return false;
    const std::size_t n = r.size();
    for ( std::size_t i = 0; i < n; ++i )
    {
        if ( r.at( i, i ).is_zero() )
            return false;
        for ( std::size_t j = 0; j < n; ++j )
        {
            const MatrixEntry& e = r.at( i, j );
            if ( e != r.at( j, i ) )
                return false;
            const MatrixEntry& di = r.at( i, i );
            const MatrixEntry& dj = r.at( j, j );
            switch ( e.kind )
            {
            case MatrixEntry::Kind::constant:
                if ( di != e || dj != e )
                    return false;
                break;
            case MatrixEntry::Kind::one:
                if ( di.kind != MatrixEntry::Kind::one || dj.kind != MatrixEntry::Kind::one )
                    return false;
                break;
            case MatrixEntry::Kind::zero:
                if ( di.is_constant() && di == dj )
                    return false;
                break;
            }
            for ( std::size_t k = 0; k < n; ++k )
                if ( !e.is_zero() && !r.at( j, k ).is_zero() && r.at( i, k ).is_zero() )
                    return false;
        }
    }
    return true;
}

Valuation canonical_valuation( const RepMatrix& r, const ConstantSet& constants )
{
    if ( !is_consistent_matrix( r, constants ) )
        throw PreconditionError( "canonical_valuation requires a consistent matrix" );
    const std::size_t n = r.size();
    Valuation w( n );
    for ( std::size_t i = 0; i < n; ++i )
        w[ i ] = r.at( i, i ).is_constant() ? r.at( i, i ).symbol : constants.fresh( i );
    for ( std::size_t i = 0; i + 1 < n; ++i )
        for ( std::size_t j = i + 1; j < n; ++j )
            if ( !r.at( i, j ).is_zero() )
                w[ j ] = w[ i ];
    return w;
}

RegisterClasses classes_of( const RepMatrix& r )
{
    RegisterClasses out;
    const std::size_t n = r.size();
    std::vector< bool > placed( n, false );
    for ( std::size_t i = 0; i < n; ++i )
    {
        if ( placed[ i ] )
            continue;
        std::vector< RegisterIndex > block;
        for ( std::size_t j = i; j < n; ++j )
            if ( !placed[ j ] && ( j == i || !r.at( i, j ).is_zero() ) )
            {
                block.push_back( j );
                placed[ j ] = true;
            }
        out.blocks.push_back( std::move( block ) );
        const MatrixEntry& d = r.at( i, i );
        out.labels.push_back( d.is_constant() ? std::optional< Symbol >( d.symbol ) : std::nullopt );
    }
    return out;
}

RepMatrix matrix_of_classes( std::size_t n, const RegisterClasses& classes )
{
    RepMatrix r( n );
    for ( std::size_t b = 0; b < classes.blocks.size(); ++b )
    {
        const auto& label = classes.labels[ b ];
        const MatrixEntry e = label ? MatrixEntry::constant( *label ) : MatrixEntry::one();
        for ( RegisterIndex i : classes.blocks[ b ] )
            for ( RegisterIndex j : classes.blocks[ b ] )
                r.set( i, j, e );
    }
    return r;
}

namespace
{

// Labels blocks [b, k) recursively: nullopt first, then unused constants in
// ascending order.
void label_blocks( const std::vector< std::uint8_t >& rgs, std::size_t k, const ConstantSet& constants,
                   std::vector< std::optional< Symbol > >& labels, std::vector< bool >& used, std::size_t b,
                   std::vector< RepMatrix >& out )
{
    if ( b == k )
    {
        const std::size_t n = rgs.size();
        RepMatrix r( n );
        for ( std::size_t i = 0; i < n; ++i )
            for ( std::size_t j = 0; j < n; ++j )
                if ( rgs[ i ] == rgs[ j ] )
                {
                    const auto& label = labels[ rgs[ i ] ];
                    r.set( i, j, label ? MatrixEntry::constant( *label ) : MatrixEntry::one() );
                }
        out.push_back( std::move( r ) );
        return;
    }
    labels[ b ] = std::nullopt;
    label_blocks( rgs, k, constants, labels, used, b + 1, out );
    const auto& symbols = constants.symbols();
    for ( std::size_t c = 0; c < symbols.size(); ++c )
    {
        if ( used[ c ] )
            continue;
        used[ c ] = true;
        labels[ b ] = symbols[ c ];
        label_blocks( rgs, k, constants, labels, used, b + 1, out );
        used[ c ] = false;
    }
    labels[ b ] = std::nullopt;
}

} // namespace

std::vector< RepMatrix > universe( std::size_t n_registers, const ConstantSet& constants )
{
    if ( n_registers == 0 )
        throw UsageError( "universe needs at least one register" );
    if ( n_registers > 64 )
        throw UsageError( "too many registers" );
    std::vector< RepMatrix > out;
    std::vector< std::uint8_t > rgs( n_registers, 0 );
    std::vector< std::uint8_t > prefix_max( n_registers, 0 ); // max of rgs[0..i]
    std::vector< std::optional< Symbol > > labels( n_registers );
    std::vector< bool > used( constants.size(), false );

    for ( ;; )
    {
        const std::size_t k = prefix_max[ n_registers - 1 ] + 1u;
        label_blocks( rgs, k, constants, labels, used, 0, out );

        // Advance to the next restricted-growth string.
        std::size_t i = n_registers;
        while ( i-- > 1 )
        {
            if ( rgs[ i ] <= prefix_max[ i - 1 ] )
            {
                ++rgs[ i ];
                prefix_max[ i ] = std::max( prefix_max[ i - 1 ], rgs[ i ] );
                for ( std::size_t j = i + 1; j < n_registers; ++j )
                {
                    rgs[ j ] = 0;
                    prefix_max[ j ] = prefix_max[ i ];
                }
                break;
            }
        }
        if ( i == 0 )
            break;
    }
    return out;
}

std::vector< RepMatrix > literal_universe( std::size_t n_registers, const ConstantSet& constants,
                                           std::uint64_t max_candidates )
{
    if ( n_registers == 0 )
        throw UsageError( "universe needs at least one register" );
    const std::size_t cells = n_registers * n_registers;
    const std::uint64_t base = constants.size() + 2;
    std::uint64_t total = 1;
    for ( std::size_t i = 0; i < cells; ++i )
    {
        if ( total > max_candidates / base )
            throw UsageError( "literal universe scan is too large for " + std::to_string( n_registers )
                              + " registers" );
        total *= base;
    }

    std::vector< MatrixEntry > alphabet{ MatrixEntry::zero(), MatrixEntry::one() };
    for ( Symbol c : constants )
        alphabet.push_back( MatrixEntry::constant( c ) );

    std::vector< RepMatrix > out;
    std::vector< std::size_t > digit( cells, 0 );
    RepMatrix r( n_registers );
    for ( std::uint64_t step = 0; step < total; ++step )
    {
        for ( std::size_t cell = 0; cell < cells; ++cell )
            r.set( cell / n_registers, cell % n_registers, alphabet[ digit[ cell ] ] );
        if ( is_consistent_matrix( r, constants ) )
            out.push_back( r );
        std::size_t cell = 0;
        while ( cell < cells && ++digit[ cell ] == alphabet.size() )
            digit[ cell++ ] = 0;
    }
    return out;
}

std::uint64_t universe_size( std::size_t n_registers, std::size_t n_constants )
{
    // Stirling numbers of the second kind, row by row.
    std::vector< std::uint64_t > stirling( n_registers + 1, 0 );
    stirling[ 0 ] = 1;
    for ( std::size_t n = 1; n <= n_registers; ++n )
    {
        for ( std::size_t k = n; k >= 1; --k )
            stirling[ k ] = k * stirling[ k ] + stirling[ k - 1 ];
        stirling[ 0 ] = 0;
    }
    std::uint64_t total = 0;
    for ( std::size_t k = 1; k <= n_registers; ++k )
    {
        // Injective partial maps from k blocks into n_constants constants:
        // sum over j of C(k, j) * n_constants! / (n_constants - j)!.
        std::uint64_t maps = 0;
        std::uint64_t binom = 1;
        std::uint64_t falling = 1;
        for ( std::size_t j = 0; j <= std::min( k, n_constants ); ++j )
        {
            maps += binom * falling;
            binom = binom * ( k - j ) / ( j + 1 );
            falling *= ( n_constants - j );
        }
        total += stirling[ k ] * maps;
    }
    return total;
}

std::vector< std::string > default_register_names( std::size_t n )
{
    std::vector< std::string > names;
    for ( std::size_t i = 0; i < n; ++i )
        names.push_back( "x" + std::to_string( i + 1 ) );
    return names;
}

std::string to_class_notation( const RepMatrix& r, const std::vector< std::string >& register_names )
{
    const RegisterClasses classes = classes_of( r );
    std::ostringstream out;
    for ( std::size_t b = 0; b < classes.blocks.size(); ++b )
    {
        if ( b > 0 )
            out << ' ';
        out << '{';
        for ( std::size_t k = 0; k < classes.blocks[ b ].size(); ++k )
        {
            if ( k > 0 )
                out << ' ';
            out << register_names.at( classes.blocks[ b ][ k ] );
        }
        if ( classes.labels[ b ] )
            out << '=' << *classes.labels[ b ];
        out << '}';
    }
    return out.str();
}

} // namespace regmc

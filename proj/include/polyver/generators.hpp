#pragma once

#include "circuit.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polyver
{

/// mt19937_64 with a portable bounded draw, so generated corpora are identical on every platform.
class portable_rng
{
public:
  explicit portable_rng( std::uint64_t seed ) : engine_( seed ) {}

  /// Uniform in [0, bound).
  std::uint64_t below( std::uint64_t bound )
  {
    if ( bound == 0u )
      throw std::invalid_argument( "empty range" );
    const std::uint64_t limit = ~std::uint64_t{ 0 } - ( ~std::uint64_t{ 0 } % bound );
    std::uint64_t x;
    do
    {
      x = engine_();
    } while ( x >= limit );
    return x % bound;
  }

  std::uint64_t between( std::uint64_t lo, std::uint64_t hi ) { return lo + below( hi - lo + 1u ); }

  bool chance( std::uint64_t num, std::uint64_t den ) { return below( den ) < num; }

  template<class T>
  void shuffle( std::vector<T>& items )
  {
    for ( std::size_t i = items.size(); i > 1u; --i )
      std::swap( items[i - 1u], items[below( i )] );
  }

  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

/*! \brief Random fanout-free circuit with `n` PIs, each used exactly once.
 *
 * Binary AND/OR/NAND/NOR gates over a random split of the shuffled PIs, with
 * occasional inverters. `depth` bounds the number of binary gates on any
 * PI-to-PO path; 0 means unbounded, and bounds below ceil(log2 n) are raised
 * to it.
 */
inline circuit generate_tree( std::size_t n, std::size_t depth, std::uint64_t seed )
{
  if ( n < 2u )
    throw std::invalid_argument( "tree generator needs at least 2 inputs" );
  portable_rng rng( seed );
  circuit c;
  for ( std::size_t i = 0; i < n; ++i )
    c.inputs.push_back( "x" + std::to_string( i ) );
  std::vector<std::size_t> leaves( n );
  for ( std::size_t i = 0; i < n; ++i )
    leaves[i] = i;
  rng.shuffle( leaves );

  const std::size_t min_depth = static_cast<std::size_t>( std::bit_width( n - 1u ) );
  const std::size_t limit = depth == 0u ? n : std::max( depth, min_depth );
  constexpr gate_kind kinds[] = { gate_kind::and_, gate_kind::or_, gate_kind::nand, gate_kind::nor };
  std::size_t counter = 0;
  auto fresh = [&] { return "g" + std::to_string( counter++ ); };
  auto maybe_invert = [&]( std::string signal ) {
    if ( !rng.chance( 1u, 8u ) )
      return signal;
    auto name = fresh();
    c.gates.push_back( { gate_kind::inv, name, { std::move( signal ) } } );
    return name;
  };

  auto build = [&]( auto&& self, std::size_t lo, std::size_t hi, std::size_t levels ) -> std::string {
    const auto count = hi - lo;
    if ( count == 1u )
      return maybe_invert( c.inputs[leaves[lo]] );
    /* each side must fit below the remaining depth */
    const std::size_t side = levels - 1u >= 63u ? count : std::min<std::size_t>( count, std::size_t{ 1 } << ( levels - 1u ) );
    const std::size_t min_left = count > side ? count - side : 1u;
    const std::size_t max_left = std::min( count - 1u, side );
    const auto left_count = static_cast<std::size_t>( rng.between( min_left, max_left ) );
    auto left = self( self, lo, lo + left_count, levels - 1u );
    auto right = self( self, lo + left_count, hi, levels - 1u );
    const auto kind = kinds[rng.below( 4u )];
    auto name = fresh();
    c.gates.push_back( { kind, name, { std::move( left ), std::move( right ) } } );
    return maybe_invert( std::move( name ) );
  };

  c.outputs.push_back( build( build, 0u, n, limit ) );
  return c;
}

/*! \brief Array multiplier of two `bits`-wide operands.
 *
 * PIs a0.., b0..; POs p0..p(2*bits-1). Partial products are added row by row
 * with ripple-carry full adders built from AND/OR/XOR gates.
 */
inline circuit generate_array_multiplier( std::size_t bits )
{
  if ( bits == 0u )
    throw std::invalid_argument( "multiplier needs at least one bit" );
  circuit c;
  for ( std::size_t i = 0; i < bits; ++i )
    c.inputs.push_back( "a" + std::to_string( i ) );
  for ( std::size_t i = 0; i < bits; ++i )
    c.inputs.push_back( "b" + std::to_string( i ) );

  auto add_gate = [&]( gate_kind kind, std::string name, std::vector<std::string> ins ) {
    c.gates.push_back( { kind, name, std::move( ins ) } );
    return name;
  };
  auto pp = [&]( std::size_t row, std::size_t col ) {
    return add_gate( gate_kind::and_, "pp_" + std::to_string( row ) + "_" + std::to_string( col ),
                     { "a" + std::to_string( col ), "b" + std::to_string( row ) } );
  };

  std::vector<std::string> acc;
  for ( std::size_t j = 0; j < bits; ++j )
    acc.push_back( pp( 0, j ) );

  for ( std::size_t row = 1; row < bits; ++row )
  {
    std::string carry;
    const auto tag = "_" + std::to_string( row ) + "_";
    for ( std::size_t j = 0; j < bits; ++j )
    {
      const auto pos = row + j;
      const auto x = pp( row, j );
      const auto id = tag + std::to_string( pos );
      if ( pos >= acc.size() )
      {
        /* nothing accumulated at this position yet: half adder with the carry */
        if ( carry.empty() )
        {
          acc.push_back( x );
          continue;
        }
        auto s = add_gate( gate_kind::xor_, "s" + id, { x, carry } );
        carry = add_gate( gate_kind::and_, "c" + id, { x, carry } );
        acc.push_back( s );
        continue;
      }
      const auto y = acc[pos];
      if ( carry.empty() )
      {
        acc[pos] = add_gate( gate_kind::xor_, "s" + id, { x, y } );
        carry = add_gate( gate_kind::and_, "c" + id, { x, y } );
        continue;
      }
      const auto t = add_gate( gate_kind::xor_, "t" + id, { x, y } );
      acc[pos] = add_gate( gate_kind::xor_, "s" + id, { t, carry } );
      const auto g = add_gate( gate_kind::and_, "g" + id, { x, y } );
      const auto p = add_gate( gate_kind::and_, "p" + id, { t, carry } );
      carry = add_gate( gate_kind::or_, "c" + id, { g, p } );
    }
    acc.push_back( carry );
  }
  for ( std::size_t k = 0; k < acc.size(); ++k )
  {
    c.gates.push_back( { gate_kind::buf, "p" + std::to_string( k ), { acc[k] } } );
    c.outputs.push_back( "p" + std::to_string( k ) );
  }
  return c;
}

} // namespace polyver

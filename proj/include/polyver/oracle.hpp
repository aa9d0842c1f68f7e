#pragma once

#include "circuit.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyver
{

/*! \brief Exhaustive truth table of a multi-output function.
 *
 * Row r assigns bit i of r to input i, so input 0 is the least significant
 * position and input n-1 the most significant. Rows are packed 64 per word.
 */
struct truth_table
{
  std::size_t input_count{ 0u };
  std::vector<std::vector<std::uint64_t>> outputs;

  std::size_t row_count() const noexcept { return std::size_t{ 1 } << input_count; }
  std::size_t output_count() const noexcept { return outputs.size(); }

  bool get( std::size_t po, std::size_t row ) const { return ( outputs.at( po ).at( row >> 6 ) >> ( row & 63u ) ) & 1u; }

  friend bool operator==( truth_table const&, truth_table const& ) = default;
};

inline constexpr std::size_t default_oracle_input_cap = 20u;

namespace detail
{

inline std::uint64_t eval_word( gate_kind kind, std::vector<std::uint64_t> const& values,
                                std::vector<std::uint32_t> const& ins )
{
  switch ( kind )
  {
  case gate_kind::buf:
    return values[ins[0]];
  case gate_kind::inv:
    return ~values[ins[0]];
  case gate_kind::mux:
    return ( values[ins[0]] & values[ins[2]] ) | ( ~values[ins[0]] & values[ins[1]] );
  default:
    break;
  }
  auto acc = values[ins[0]];
  for ( std::size_t i = 1; i < ins.size(); ++i )
  {
    const auto v = values[ins[i]];
    switch ( kind )
    {
    case gate_kind::and_:
    case gate_kind::nand:
      acc &= v;
      break;
    case gate_kind::or_:
    case gate_kind::nor:
      acc |= v;
      break;
    default:
      acc ^= v;
      break;
    }
  }
  return ( kind == gate_kind::nand || kind == gate_kind::nor ) ? ~acc : acc;
}

/* evaluates 64 assignments at once; values[i] holds the word of input i */
inline std::vector<std::uint64_t> eval_block( indexed_circuit const& ic, std::vector<std::uint64_t> values )
{
  values.resize( ic.signal_count(), 0u );
  for ( auto const& [id, bit] : ic.constants )
    values[id] = bit ? ~std::uint64_t{ 0 } : 0u;
  for ( auto const& g : ic.gates )
    values[g.output] = eval_word( g.kind, values, g.inputs );
  return values;
}

} // namespace detail

/// Value of every signal (indexed like `index_circuit`) under one assignment.
inline std::vector<bool> evaluate_signals( indexed_circuit const& ic, std::vector<bool> const& assignment )
{
  if ( assignment.size() != ic.input_count )
    throw std::invalid_argument( "assignment has " + std::to_string( assignment.size() ) + " bits, circuit has " +
                                 std::to_string( ic.input_count ) + " inputs" );
  std::vector<std::uint64_t> words( ic.input_count );
  for ( std::size_t i = 0; i < ic.input_count; ++i )
    words[i] = assignment[i] ? 1u : 0u;
  const auto values = detail::eval_block( ic, std::move( words ) );
  std::vector<bool> bits( values.size() );
  for ( std::size_t i = 0; i < values.size(); ++i )
    bits[i] = values[i] & 1u;
  return bits;
}

/// Gate-level simulation: PO values for one PI assignment.
inline std::vector<bool> evaluate( circuit const& c, std::vector<bool> const& assignment )
{
  const auto ic = index_circuit( c );
  const auto values = evaluate_signals( ic, assignment );
  std::vector<bool> pos;
  for ( auto id : ic.outputs )
    pos.push_back( values[id] );
  return pos;
}

inline truth_table circuit_truth_table( circuit const& c, std::size_t input_cap = default_oracle_input_cap )
{
  const auto n = c.inputs.size();
  if ( n > input_cap )
    throw std::invalid_argument( "circuit has " + std::to_string( n ) + " inputs, oracle cap is " +
                                 std::to_string( input_cap ) );
  const auto ic = index_circuit( c );

  static constexpr std::uint64_t patterns[6] = { 0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull,
                                                 0xf0f0f0f0f0f0f0f0ull, 0xff00ff00ff00ff00ull,
                                                 0xffff0000ffff0000ull, 0xffffffff00000000ull };
  const std::size_t rows = std::size_t{ 1 } << n;
  const std::size_t words = ( rows + 63u ) / 64u;
  const std::uint64_t tail_mask = rows >= 64u ? ~std::uint64_t{ 0 } : ( ( std::uint64_t{ 1 } << rows ) - 1u );

  truth_table tt{ n, std::vector<std::vector<std::uint64_t>>( c.outputs.size(), std::vector<std::uint64_t>( words ) ) };
  std::vector<std::uint64_t> in( n );
  for ( std::size_t w = 0; w < words; ++w )
  {
    for ( std::size_t i = 0; i < n; ++i )
      in[i] = i < 6u ? patterns[i] : ( ( ( w >> ( i - 6u ) ) & 1u ) ? ~std::uint64_t{ 0 } : 0u );
    const auto values = detail::eval_block( ic, in );
    for ( std::size_t po = 0; po < ic.outputs.size(); ++po )
      tt.outputs[po][w] = values[ic.outputs[po]] & tail_mask;
  }
  return tt;
}

struct table_difference
{
  std::size_t row;
  std::size_t output;
};

/// First differing (row, output), scanning rows in ascending order; nullopt if equal.
inline std::optional<table_difference> tables_equal( truth_table const& a, truth_table const& b )
{
  if ( a.input_count != b.input_count || a.outputs.size() != b.outputs.size() )
    throw std::invalid_argument( "truth tables have different shapes" );
  const auto words = a.outputs.empty() ? 0u : a.outputs[0].size();
  for ( std::size_t w = 0; w < words; ++w )
  {
    std::optional<table_difference> best;
    for ( std::size_t po = 0; po < a.outputs.size(); ++po )
    {
      const auto diff = a.outputs[po][w] ^ b.outputs[po][w];
      if ( diff == 0u )
        continue;
      const auto row = w * 64u + static_cast<std::size_t>( std::countr_zero( diff ) );
      if ( !best || row < best->row )
        best = table_difference{ row, po };
    }
    if ( best )
      return best;
  }
  return std::nullopt;
}

/// Assignment of row r as PI bits.
inline std::vector<bool> row_assignment( std::size_t row, std::size_t input_count )
{
  std::vector<bool> bits( input_count );
  for ( std::size_t i = 0; i < input_count; ++i )
    bits[i] = ( row >> i ) & 1u;
  return bits;
}

/// Hex digits of one output column, most significant row first.
inline std::string to_hex( truth_table const& tt, std::size_t po )
{
  static constexpr char digits[] = "0123456789abcdef";
  const auto rows = tt.row_count();
  const auto nibbles = rows < 4u ? 1u : rows / 4u;
  std::string s;
  s.reserve( nibbles );
  for ( std::size_t k = nibbles; k-- > 0; )
  {
    unsigned v = 0;
    for ( std::size_t b = 0; b < 4u; ++b )
    {
      const auto row = k * 4u + b;
      if ( row < rows && tt.get( po, row ) )
        v |= 1u << b;
    }
    s.push_back( digits[v] );
  }
  return s;
}

} // namespace polyver

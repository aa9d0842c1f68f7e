#pragma once

#include "bdd.hpp"
#include "circuit.hpp"
#include "symbolic_sim.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace polyver
{

/// The two circuits do not share an input/output interface.
class interface_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// `extract_counterexample` was asked for a witness of the constant 0.
class no_witness_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail
{

inline void append_renamed( circuit const& src, std::string const& prefix, circuit& dst,
                            std::unordered_set<std::string>& used, std::vector<std::string>& po_signals )
{
  std::unordered_map<std::string, std::string> rename;
  for ( auto const& name : src.inputs )
    rename.emplace( name, name );
  for ( auto const& k : src.constants )
  {
    auto fresh = fresh_name( prefix + k.name, used );
    dst.constants.push_back( { fresh, k.value } );
    rename.emplace( k.name, std::move( fresh ) );
  }
  for ( auto const& g : src.gates )
    rename.emplace( g.output, fresh_name( prefix + g.output, used ) );
  for ( auto const& g : src.gates )
  {
    gate copy{ g.kind, rename.at( g.output ), {} };
    for ( auto const& in : g.inputs )
      copy.inputs.push_back( rename.at( in ) );
    dst.gates.push_back( std::move( copy ) );
  }
  for ( auto const& po : src.outputs )
    po_signals.push_back( rename.at( po ) );
}

} // namespace detail

/*! \brief Miter of two circuits over the same PIs.
 *
 * Internal signals are prefixed with `l_` / `r_`. Output pair j feeds an XOR;
 * the XORs are OR-folded left to right into the single output `out`. With one
 * output pair the XOR itself drives `out`.
 */
inline circuit build_miter( circuit const& c1, circuit const& c2 )
{
  if ( c1.inputs != c2.inputs )
  {
    for ( std::size_t i = 0; i < std::min( c1.inputs.size(), c2.inputs.size() ); ++i )
      if ( c1.inputs[i] != c2.inputs[i] )
        throw interface_error( "primary input " + std::to_string( i ) + " differs: '" + c1.inputs[i] + "' vs '" +
                               c2.inputs[i] + "'" );
    throw interface_error( "primary input counts differ: " + std::to_string( c1.inputs.size() ) + " vs " +
                           std::to_string( c2.inputs.size() ) );
  }
  if ( c1.outputs.size() != c2.outputs.size() )
    throw interface_error( "primary output counts differ: " + std::to_string( c1.outputs.size() ) + " vs " +
                           std::to_string( c2.outputs.size() ) );
  if ( c1.outputs.empty() )
    throw interface_error( "circuits have no primary outputs" );
  validate( c1 );
  validate( c2 );

  circuit m{ c1.inputs, {}, {}, {} };
  std::unordered_set<std::string> used( c1.inputs.begin(), c1.inputs.end() );
  const auto out_name = detail::fresh_name( "out", used );
  std::vector<std::string> left, right;
  detail::append_renamed( c1, "l_", m, used, left );
  detail::append_renamed( c2, "r_", m, used, right );

  const auto pairs = left.size();
  std::vector<std::string> diffs;
  for ( std::size_t j = 0; j < pairs; ++j )
  {
    auto name = pairs == 1u ? out_name : detail::fresh_name( "miter_x" + std::to_string( j ), used );
    m.gates.push_back( { gate_kind::xor_, name, { left[j], right[j] } } );
    diffs.push_back( std::move( name ) );
  }
  auto acc = diffs[0];
  for ( std::size_t j = 1; j < pairs; ++j )
  {
    auto name = j + 1u == pairs ? out_name : detail::fresh_name( "miter_o" + std::to_string( j ), used );
    m.gates.push_back( { gate_kind::or_, name, { acc, diffs[j] } } );
    acc = std::move( name );
  }
  m.outputs.push_back( out_name );
  return m;
}

/*! \brief Smallest satisfying assignment in variable-index order.
 *
 * Fixes x0, x1, ... in turn, preferring 0 whenever the remaining cofactor is
 * still satisfiable. Variables outside the support end up 0.
 */
inline std::vector<bool> extract_counterexample( manager& mgr, node_ref f )
{
  if ( f == manager::zero() )
    throw no_witness_error( "the constant 0 function has no satisfying assignment" );
  std::vector<bool> assignment( mgr.var_count(), false );
  for ( std::uint32_t v = 0; v < mgr.var_count() && !manager::is_terminal( f ); ++v )
  {
    const auto f0 = mgr.cofactor( f, v, false );
    if ( f0 != manager::zero() )
    {
      f = f0;
    }
    else
    {
      assignment[v] = true;
      f = mgr.cofactor( f, v, true );
    }
  }
  return assignment;
}

enum class verdict
{
  equivalent,
  not_equivalent,
  aborted
};

inline constexpr std::string_view to_string( verdict v )
{
  switch ( v )
  {
  case verdict::equivalent: return "equivalent";
  case verdict::not_equivalent: return "not_equivalent";
  case verdict::aborted: return "aborted";
  }
  return "?";
}

struct verify_outcome
{
  verdict result;
  std::optional<std::vector<bool>> counterexample;
  sim_stats stats;
};

/// Decides equivalence through the miter output BDD under `pi_order`.
inline verify_outcome check_equivalence( circuit const& c1, circuit const& c2, std::vector<std::uint32_t> const& pi_order,
                                         sim_options const& options = {} )
{
  const auto m = build_miter( c1, c2 );
  auto run = simulate( m, pi_order, options );
  if ( !run.completed() )
    return { verdict::aborted, std::nullopt, std::move( run.stats ) };
  const auto out = run.bdd( m.outputs[0] );
  if ( out == manager::zero() )
    return { verdict::equivalent, std::nullopt, std::move( run.stats ) };
  try
  {
    return { verdict::not_equivalent, extract_counterexample( run.mgr, out ), std::move( run.stats ) };
  }
  catch ( capacity_error const& )
  {
    return { verdict::aborted, std::nullopt, std::move( run.stats ) };
  }
}

/// Uses the depth-first order of `c1`.
inline verify_outcome check_equivalence( circuit const& c1, circuit const& c2, sim_options const& options = {} )
{
  return check_equivalence( c1, c2, dfs_variable_order( c1 ), options );
}

} // namespace polyver

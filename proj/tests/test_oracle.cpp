#include <gtest/gtest.h>

#include <polyver/oracle.hpp>
#include <polyver/symbolic_sim.hpp>

#include "support/test_support.hpp"

#include <map>

using namespace polyver;

namespace
{

/* name-keyed recursive evaluator, one row at a time */
bool naive_value( circuit const& c, std::string const& sig, std::vector<bool> const& a, std::map<std::string, bool>& memo )
{
  if ( auto it = memo.find( sig ); it != memo.end() )
    return it->second;
  for ( std::size_t i = 0; i < c.inputs.size(); ++i )
    if ( c.inputs[i] == sig )
      return memo[sig] = a[i];
  for ( auto const& k : c.constants )
    if ( k.name == sig )
      return memo[sig] = k.value;
  for ( auto const& g : c.gates )
  {
    if ( g.output != sig )
      continue;
    std::vector<bool> v;
    for ( auto const& in : g.inputs )
      v.push_back( naive_value( c, in, a, memo ) );
    bool r = false;
    switch ( g.kind )
    {
    case gate_kind::buf: r = v[0]; break;
    case gate_kind::inv: r = !v[0]; break;
    case gate_kind::mux: r = v[0] ? v[2] : v[1]; break;
    case gate_kind::and_:
    case gate_kind::nand:
      r = std::all_of( v.begin(), v.end(), []( bool b ) { return b; } );
      r = g.kind == gate_kind::nand ? !r : r;
      break;
    case gate_kind::or_:
    case gate_kind::nor:
      r = std::any_of( v.begin(), v.end(), []( bool b ) { return b; } );
      r = g.kind == gate_kind::nor ? !r : r;
      break;
    case gate_kind::xor_:
      r = std::count( v.begin(), v.end(), true ) % 2 == 1;
      break;
    }
    return memo[sig] = r;
  }
  throw std::logic_error( "unknown signal " + sig );
}

std::string bits_of( truth_table const& tt, std::size_t po = 0 )
{
  std::string s;
  for ( std::size_t r = 0; r < tt.row_count(); ++r )
    s.push_back( tt.get( po, r ) ? '1' : '0' );
  return s;
}

circuit two_input( gate_kind kind )
{
  return { { "x1", "x2" }, { "f" }, {}, { { kind, "f", { "x1", "x2" } } } };
}

} // namespace

TEST( Oracle, AndTable )
{
  const auto tt = circuit_truth_table( two_input( gate_kind::and_ ) );
  EXPECT_EQ( tt.input_count, 2u );
  EXPECT_EQ( bits_of( tt ), "0001" );
}

TEST( Oracle, InverterTable )
{
  circuit c{ { "x1" }, { "f" }, {}, { { gate_kind::inv, "f", { "x1" } } } };
  EXPECT_EQ( bits_of( circuit_truth_table( c ) ), "10" );
}

TEST( Oracle, MuxSelectsThenOnOne )
{
  circuit c{ { "s", "e", "t" }, { "f" }, {}, { { gate_kind::mux, "f", { "s", "e", "t" } } } };
  const auto tt = circuit_truth_table( c );
  for ( std::size_t r = 0; r < 8; ++r )
  {
    const bool s = r & 1u, e = r & 2u, t = r & 4u;
    EXPECT_EQ( tt.get( 0, r ), s ? t : e ) << r;
  }
}

TEST( Oracle, MultiWordTablesMatchNaiveEvaluator )
{
  portable_rng rng( 1001 );
  for ( int trial = 0; trial < 25; ++trial )
  {
    const auto n = 1 + rng.below( 9 );
    const auto c = test::random_circuit( rng, { n, 25, 3, 4, true, true, true } );
    const auto tt = circuit_truth_table( c );
    ASSERT_EQ( tt.output_count(), c.outputs.size() );
    for ( std::size_t r = 0; r < tt.row_count(); ++r )
    {
      const auto a = row_assignment( r, n );
      std::map<std::string, bool> memo;
      for ( std::size_t po = 0; po < c.outputs.size(); ++po )
        ASSERT_EQ( tt.get( po, r ), naive_value( c, c.outputs[po], a, memo ) ) << "row " << r;
      EXPECT_EQ( evaluate( c, a ), [&] {
        std::vector<bool> v;
        for ( std::size_t po = 0; po < c.outputs.size(); ++po )
          v.push_back( tt.get( po, r ) );
        return v;
      }() );
    }
  }
}

TEST( Oracle, AgreesWithSimulatedBdds )
{
  portable_rng rng( 256 );
  for ( int trial = 0; trial < 10; ++trial )
  {
    const auto c = test::random_circuit( rng, { 8, 30, 3, 3, true, true, true } );
    const auto tt = circuit_truth_table( c );
    const auto sim = simulate( c );
    ASSERT_TRUE( sim.completed() );
    const auto roots = sim.output_bdds();
    for ( std::size_t r = 0; r < 256; ++r )
      for ( std::size_t po = 0; po < roots.size(); ++po )
        ASSERT_EQ( sim.mgr.eval( roots[po], row_assignment( r, 8 ) ), tt.get( po, r ) );
  }
}

TEST( Oracle, CapEnforced )
{
  portable_rng rng( 1 );
  const auto c = test::random_circuit( rng, { 21, 5, 1, 2, false, false, false } );
  EXPECT_THROW( (void)circuit_truth_table( c ), std::invalid_argument );
  EXPECT_THROW( (void)circuit_truth_table( two_input( gate_kind::or_ ), 1 ), std::invalid_argument );
}

TEST( Oracle, EvaluateRejectsShortAssignment )
{
  EXPECT_THROW( (void)evaluate( two_input( gate_kind::or_ ), { true } ), std::invalid_argument );
}

TEST( TablesEqual, Reflexive )
{
  const auto tt = circuit_truth_table( two_input( gate_kind::xor_ ) );
  EXPECT_FALSE( tables_equal( tt, tt ).has_value() );
}

TEST( TablesEqual, AndVersusOrFirstRow )
{
  const auto a = circuit_truth_table( two_input( gate_kind::and_ ) );
  const auto b = circuit_truth_table( two_input( gate_kind::or_ ) );
  const auto d = tables_equal( a, b );
  ASSERT_TRUE( d.has_value() );
  /* row 1: x1 = 1, x2 = 0 */
  EXPECT_EQ( d->row, 1u );
  EXPECT_EQ( d->output, 0u );
}

TEST( TablesEqual, ShapeMismatch )
{
  const auto a = circuit_truth_table( two_input( gate_kind::and_ ) );
  circuit one{ { "x" }, { "f" }, {}, { { gate_kind::buf, "f", { "x" } } } };
  EXPECT_THROW( (void)tables_equal( a, circuit_truth_table( one ) ), std::invalid_argument );
}

TEST( TablesEqual, MutantDifferenceReplays )
{
  portable_rng rng( 77 );
  int differing = 0;
  for ( int trial = 0; trial < 60; ++trial )
  {
    const auto c = test::random_circuit( rng, { 10, 20, 2, 3, true, true, false } );
    auto m = c;
    if ( !test::mutate_one_gate( m, rng ) )
      continue;
    const auto d = tables_equal( circuit_truth_table( c ), circuit_truth_table( m ) );
    if ( !d )
      continue;
    ++differing;
    const auto a = row_assignment( d->row, 10 );
    EXPECT_NE( evaluate( c, a )[d->output], evaluate( m, a )[d->output] );
  }
  EXPECT_GT( differing, 10 );
}

TEST( TablesEqual, EquivalenceRelation )
{
  portable_rng rng( 9 );
  std::vector<truth_table> tables;
  for ( int i = 0; i < 12; ++i )
  {
    circuit c{ { "a", "b", "c" }, { "f" }, {}, { { all_gate_kinds[rng.below( 5 )], "f", { "a", "b", "c" } } } };
    tables.push_back( circuit_truth_table( c ) );
  }
  auto eq = []( truth_table const& x, truth_table const& y ) { return !tables_equal( x, y ).has_value(); };
  for ( auto const& x : tables )
    for ( auto const& y : tables )
    {
      EXPECT_EQ( eq( x, y ), eq( y, x ) );
      for ( auto const& z : tables )
      {
        if ( eq( x, y ) && eq( y, z ) )
        {
          EXPECT_TRUE( eq( x, z ) );
        }
      }
    }
}

TEST( Oracle, HexDump )
{
  EXPECT_EQ( to_hex( circuit_truth_table( two_input( gate_kind::and_ ) ), 0 ), "8" );
  EXPECT_EQ( to_hex( circuit_truth_table( two_input( gate_kind::or_ ) ), 0 ), "e" );
  circuit c{ { "a", "b", "c" }, { "f" }, {}, { { gate_kind::buf, "f", { "c" } } } };
  EXPECT_EQ( to_hex( circuit_truth_table( c ), 0 ), "f0" );
}

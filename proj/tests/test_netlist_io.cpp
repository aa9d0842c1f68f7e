#include <gtest/gtest.h>

#include <polyver/netlist_io.hpp>
#include <polyver/generators.hpp>

#include "support/test_support.hpp"

#include <fstream>

using namespace polyver;

namespace
{

constexpr std::string_view minimal_and = ".inputs a b\n"
                                         ".outputs f\n"
                                         ".gate and f a b\n"
                                         ".end\n";

/* parses `text`, expecting a diagnostic on `line` containing `fragment` */
void expect_error( std::string_view text, std::size_t line, std::string const& fragment )
{
  try
  {
    (void)parse_netlist( text );
    ADD_FAILURE() << "accepted: " << text;
  }
  catch ( parse_error const& e )
  {
    EXPECT_EQ( e.line(), line ) << e.what();
    EXPECT_NE( e.reason().find( fragment ), std::string::npos ) << e.what();
    EXPECT_EQ( std::string( e.what() ).rfind( "line " + std::to_string( line ) + ": ", 0 ), 0u );
  }
}

} // namespace

TEST( Parse, MinimalAnd )
{
  const auto c = parse_netlist( minimal_and );
  EXPECT_EQ( c.inputs, ( std::vector<std::string>{ "a", "b" } ) );
  EXPECT_EQ( c.outputs, ( std::vector<std::string>{ "f" } ) );
  ASSERT_EQ( c.gates.size(), 1u );
  EXPECT_EQ( c.gates[0], ( gate{ gate_kind::and_, "f", { "a", "b" } } ) );
}

TEST( Parse, CommentsBlanksCrAndForwardReferences )
{
  const auto c = parse_netlist( "# header\r\n"
                                "\r\n"
                                "  .inputs s e t   \r\n"
                                ".outputs f\n"
                                ".gate mux f s g t  \n"
                                ".gate inv g e\n"
                                ".const one 1\n"
                                ".end\n"
                                "# after end\n"
                                "\n" );
  EXPECT_EQ( c.inputs.size(), 3u );
}

TEST( Parse, InlineCommentTokensAreNotNames )
{
  expect_error( ".inputs a\n.outputs f\n.gate buf f a # note\n.end\n", 3, "wrong number of inputs" );
}

TEST( Parse, ConstantsAndMultipleDirectives )
{
  const auto c = parse_netlist( ".inputs a\n.inputs b\n.outputs f g\n.const z 0\n.gate or f a z\n.gate xor g a b\n.end\n" );
  EXPECT_EQ( c.inputs, ( std::vector<std::string>{ "a", "b" } ) );
  EXPECT_EQ( c.constants, ( std::vector<constant_signal>{ { "z", false } } ) );
  EXPECT_EQ( c.outputs.size(), 2u );
}

TEST( Parse, Diagnostics )
{
  expect_error( ".inputs a\n.outputs f\n.gate and f a q\n.end\n", 3, "undefined signal 'q'" );
  expect_error( ".inputs a\n.outputs q\n.end\n", 2, "undefined signal 'q'" );
  expect_error( ".inputs a b\n.outputs f\n.gate and f a b\n.gate or f a b\n.end\n", 4, "duplicate signal definition" );
  expect_error( ".inputs a a\n.end\n", 1, "duplicate signal definition" );
  expect_error( ".inputs a\n.outputs f\n.gate inv f a a\n.end\n", 3, "wrong number of inputs" );
  expect_error( ".inputs a\n.outputs f\n.gate and f a\n.end\n", 3, "wrong number of inputs" );
  expect_error( ".inputs a\n.outputs f\n.gate nandx f a a\n.end\n", 3, "unknown gate kind" );
  expect_error( ".inputs a\n.outputs f\n.gate AND f a a\n.end\n", 3, "unknown gate kind" );
  expect_error( ".inputs a\n.wire w\n.end\n", 2, "unknown directive" );
  expect_error( ".INPUTS a\n.end\n", 1, "unknown directive" );
  expect_error( ".inputs 1a\n.end\n", 1, "invalid signal name" );
  expect_error( ".inputs a\n.const k 2\n.end\n", 2, "invalid constant value" );
  expect_error( ".inputs a\n.outputs a\n", 2, "missing .end" );
  expect_error( "", 1, "missing .end" );
  expect_error( ".inputs a\n.outputs a\n.end\n.inputs b\n", 4, "content after .end" );
  expect_error( ".inputs a\n.outputs f\n.gate and f a g\n.gate buf g f\n.end\n", 3, "combinational cycle" );
}

TEST( Parse, DistinctDiagnosticsPerProblem )
{
  std::set<std::string> kinds;
  for ( auto text : { ".inputs a\n.outputs f\n.gate and f a q\n.end\n", ".inputs a a\n.end\n",
                      ".inputs a\n.outputs f\n.gate inv f a a\n.end\n",
                      ".inputs a\n.outputs f\n.gate and f a f\n.end\n" } )
  {
    try
    {
      (void)parse_netlist( text );
    }
    catch ( parse_error const& e )
    {
      kinds.insert( e.reason().substr( 0, e.reason().find( '\'' ) ) );
    }
  }
  EXPECT_EQ( kinds.size(), 4u );
}

TEST( Serialize, SingleAndCanonical )
{
  const auto text = serialize_netlist( parse_netlist( minimal_and ) );
  EXPECT_EQ( text, "# polyver netlist\n.inputs a b\n.outputs f\n.gate and f a b\n.end\n" );
  EXPECT_EQ( std::count( text.begin(), text.end(), '\n' ), 5 );
}

TEST( Serialize, ConstantsBeforeGatesAndTopologicalOrder )
{
  const auto c = parse_netlist( ".inputs a\n.outputs f\n.gate or f a t\n.gate inv t k\n.const k 1\n.end\n" );
  EXPECT_EQ( serialize_netlist( c ), "# polyver netlist\n.inputs a\n.outputs f\n.const k 1\n.gate inv t k\n.gate or f a t\n.end\n" );
}

TEST( RoundTrip, ParseOfSerializeIsIdentityOnRandomCircuits )
{
  portable_rng rng( 100 );
  for ( int trial = 0; trial < 100; ++trial )
  {
    const auto c = test::random_circuit( rng, { 1 + rng.below( 12 ), rng.below( 30 ), 1 + rng.below( 3 ), 4, true, true, true } );
    EXPECT_EQ( parse_netlist( serialize_netlist( c ) ), c );
  }
}

TEST( RoundTrip, TreeCorpus )
{
  for ( std::uint64_t seed = 0; seed < 50; ++seed )
  {
    const auto c = generate_tree( 2 + seed % 30, seed % 3 == 0 ? 0 : 8, seed );
    EXPECT_EQ( parse_netlist( serialize_netlist( c ) ), c );
  }
}

TEST( RoundTrip, SerializeOfParseIsFixpoint )
{
  portable_rng rng( 7 );
  for ( int trial = 0; trial < 100; ++trial )
  {
    auto c = test::random_circuit( rng, { 1 + rng.below( 8 ), rng.below( 25 ), 2, 3, true, true, true } );
    rng.shuffle( c.gates );
    /* messy but accepted source: shuffled gates, comments, spacing */
    std::string text = "# random\n.inputs";
    for ( auto const& i : c.inputs )
      text += "   " + i;
    text += "\n\n.outputs";
    for ( auto const& o : c.outputs )
      text += "\t" + o;
    text += "\r\n";
    for ( auto const& g : c.gates )
    {
      text += ".gate " + std::string( to_string( g.kind ) ) + " " + g.output;
      for ( auto const& in : g.inputs )
        text += "  " + in;
      text += "\n# comment\n";
    }
    for ( auto const& k : c.constants )
      text += ".const " + k.name + ( k.value ? " 1\n" : " 0\n" );
    text += ".end\n";
    const auto once = serialize_netlist( parse_netlist( text ) );
    EXPECT_EQ( serialize_netlist( parse_netlist( once ) ), once );
  }
}

TEST( ReadFile, MissingFileAndContent )
{
  EXPECT_THROW( read_netlist_file( "/nonexistent/file.net" ), std::runtime_error );
  const auto path = testing::TempDir() + "polyver_io.net";
  {
    std::ofstream( path ) << minimal_and;
  }
  EXPECT_EQ( read_netlist_file( path ).gates.size(), 1u );
}

TEST( Names, Validity )
{
  EXPECT_TRUE( valid_signal_name( "_a9" ) );
  EXPECT_TRUE( valid_signal_name( "Z" ) );
  EXPECT_FALSE( valid_signal_name( "" ) );
  EXPECT_FALSE( valid_signal_name( "9a" ) );
  EXPECT_FALSE( valid_signal_name( "a-b" ) );
  EXPECT_FALSE( valid_signal_name( "a.b" ) );
}

#pragma once

#include "gate_kind.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace polyver
{

/// Handle to a node of one manager. Index 0 is the 0-terminal, index 1 the 1-terminal.
struct node_ref
{
  std::uint32_t index{ 0u };

  friend constexpr bool operator==( node_ref, node_ref ) = default;
  friend constexpr auto operator<=>( node_ref, node_ref ) = default;
};

struct bdd_node
{
  std::uint32_t level; /* position in the order, 0 = top; terminals use var_count */
  node_ref high;
  node_ref low;
};

/// Raised when creating a node would exceed the manager's node limit.
class capacity_error : public std::runtime_error
{
public:
  explicit capacity_error( std::size_t limit )
      : std::runtime_error( "BDD node capacity of " + std::to_string( limit ) + " nodes exceeded" ),
        limit_( limit )
  {
  }

  std::size_t limit() const noexcept { return limit_; }

private:
  std::size_t limit_;
};

namespace detail
{

struct triple_key
{
  std::uint32_t a, b, c;
  friend constexpr bool operator==( triple_key const&, triple_key const& ) = default;
};

struct triple_hash
{
  std::size_t operator()( triple_key const& k ) const noexcept
  {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for ( std::uint64_t v : { k.a, k.b, k.c } )
    {
      h ^= v + 0x9e3779b97f4a7c15ull + ( h << 6 ) + ( h >> 2 );
      h *= 0xbf58476d1ce4e5b9ull;
    }
    return static_cast<std::size_t>( h ^ ( h >> 31 ) );
  }
};

} // namespace detail

/*! \brief Reduced ordered BDD manager without complement edges.
 *
 * Nodes live in an arena that only grows; there is no garbage collection and
 * no reordering, so `created_count()` is a monotone measure of all work done.
 * The unique table maps (level, high, low) to a node and the computed table
 * memoizes ITE results keyed on the raw operand triple.
 *
 * A manager is single-owner: it may be moved between threads but must not be
 * used concurrently.
 */
class manager
{
public:
  static constexpr std::size_t default_capacity = std::size_t{ 1 } << 26;

  /// `order[v]` is the level of external variable `v`.
  manager( std::uint32_t var_count, std::vector<std::uint32_t> order,
           std::size_t node_capacity = default_capacity )
      : var_count_( var_count ), level_of_var_( std::move( order ) ), capacity_( node_capacity )
  {
    if ( level_of_var_.size() != var_count_ )
      throw std::invalid_argument( "variable order has " + std::to_string( level_of_var_.size() ) +
                                   " entries, expected " + std::to_string( var_count_ ) );
    var_at_level_.assign( var_count_, var_count_ );
    for ( std::uint32_t v = 0; v < var_count_; ++v )
    {
      const auto level = level_of_var_[v];
      if ( level >= var_count_ )
        throw std::invalid_argument( "variable order entry " + std::to_string( level ) + " out of range" );
      if ( var_at_level_[level] != var_count_ )
        throw std::invalid_argument( "variable order is not a permutation: level " +
                                     std::to_string( level ) + " assigned twice" );
      var_at_level_[level] = v;
    }
    nodes_.push_back( { var_count_, zero(), zero() } );
    nodes_.push_back( { var_count_, one(), one() } );
  }

  /// Identity order: variable i at level i.
  explicit manager( std::uint32_t var_count )
      : manager( var_count, identity_order( var_count ) )
  {
  }

  static std::vector<std::uint32_t> identity_order( std::uint32_t var_count )
  {
    std::vector<std::uint32_t> order( var_count );
    for ( std::uint32_t i = 0; i < var_count; ++i )
      order[i] = i;
    return order;
  }

  static constexpr node_ref zero() noexcept { return node_ref{ 0u }; }
  static constexpr node_ref one() noexcept { return node_ref{ 1u }; }
  static constexpr node_ref constant( bool value ) noexcept { return value ? one() : zero(); }
  static constexpr bool is_terminal( node_ref f ) noexcept { return f.index < 2u; }

  std::uint32_t var_count() const noexcept { return var_count_; }
  std::uint32_t level_of( std::uint32_t var ) const { return level_of_var_.at( var ); }
  std::uint32_t var_at_level( std::uint32_t level ) const { return var_at_level_.at( level ); }
  std::vector<std::uint32_t> const& order() const noexcept { return level_of_var_; }

  /// Number of internal nodes ever created. Never decreases.
  std::size_t created_count() const noexcept { return nodes_.size() - 2u; }
  /// Number of non-memoized recursive ITE entries. Never decreases.
  std::size_t ite_calls() const noexcept { return ite_calls_; }
  std::size_t unique_table_size() const noexcept { return unique_.size(); }
  std::size_t computed_table_size() const noexcept { return computed_.size(); }
  std::size_t node_capacity() const noexcept { return capacity_; }
  /// One past the largest node index issued so far.
  std::size_t arena_size() const noexcept { return nodes_.size(); }

  void clear_computed_table() { computed_.clear(); }

  bdd_node const& node( node_ref f ) const
  {
    check( f );
    return nodes_[f.index];
  }
  std::uint32_t level( node_ref f ) const { return node( f ).level; }
  node_ref high( node_ref f ) const { return node( f ).high; }
  node_ref low( node_ref f ) const { return node( f ).low; }

  /// External variable labelling an internal node.
  std::uint32_t var_of( node_ref f ) const
  {
    if ( is_terminal( f ) )
      throw std::invalid_argument( "terminal node has no variable" );
    return var_at_level_[level( f )];
  }

  /// Projection function of external variable `index`.
  node_ref var( std::uint32_t index )
  {
    check_var( index );
    return find_or_add( level_of_var_[index], one(), zero() );
  }

  /// Canonical node for (level, high, low); applies the reduction rule.
  node_ref make_node( std::uint32_t level, node_ref high, node_ref low )
  {
    check( high );
    check( low );
    if ( level >= var_count_ || level >= nodes_[high.index].level || level >= nodes_[low.index].level )
      throw std::invalid_argument( "make_node violates the variable order" );
    if ( high == low )
      return high;
    return find_or_add( level, high, low );
  }

  /// (f AND g) OR (NOT f AND h)
  node_ref ite( node_ref f, node_ref g, node_ref h )
  {
    check( f );
    check( g );
    check( h );
    return ite_rec( f, g, h );
  }

  node_ref negate( node_ref f ) { return ite( f, zero(), one() ); }

  /*! \brief Gate-level synthesis through ITE.
   *
   * Multi-input gates fold left-associatively. A k-input NAND/NOR folds AND/OR
   * over the first k-1 operands and applies the inverting gate last. MUX takes
   * (select, else, then).
   */
  node_ref apply( gate_kind kind, std::span<const node_ref> operands )
  {
    if ( !arity_ok( kind, operands.size() ) )
      throw std::invalid_argument( "wrong number of operands for " + std::string( to_string( kind ) ) );
    for ( auto f : operands )
      check( f );

    switch ( kind )
    {
    case gate_kind::inv:
      return negate( operands[0] );
    case gate_kind::buf:
      return operands[0];
    case gate_kind::mux:
      return ite( operands[0], operands[2], operands[1] );
    case gate_kind::and_:
    case gate_kind::or_:
    case gate_kind::xor_:
    {
      auto acc = operands[0];
      for ( std::size_t i = 1; i < operands.size(); ++i )
        acc = apply2( kind, acc, operands[i] );
      return acc;
    }
    case gate_kind::nand:
    case gate_kind::nor:
    {
      const auto inner = kind == gate_kind::nand ? gate_kind::and_ : gate_kind::or_;
      auto acc = operands[0];
      for ( std::size_t i = 1; i + 1 < operands.size(); ++i )
        acc = apply2( inner, acc, operands[i] );
      return apply2( kind, acc, operands.back() );
    }
    }
    throw std::invalid_argument( "unknown gate kind" );
  }

  node_ref apply( gate_kind kind, std::initializer_list<node_ref> operands )
  {
    return apply( kind, std::span<const node_ref>( operands.begin(), operands.size() ) );
  }

  /// f with variable `index` fixed to `value`.
  node_ref cofactor( node_ref f, std::uint32_t index, bool value )
  {
    check( f );
    check_var( index );
    std::unordered_map<std::uint32_t, node_ref> memo;
    return cofactor_rec( f, level_of_var_[index], value, memo );
  }

  /// Follows the assigned bits to a terminal; `assignment[v]` is the value of variable v.
  bool eval( node_ref f, std::vector<bool> const& assignment ) const
  {
    check( f );
    while ( !is_terminal( f ) )
    {
      const auto& n = nodes_[f.index];
      const auto v = var_at_level_[n.level];
      if ( v >= assignment.size() )
        throw std::invalid_argument( "assignment does not cover variable " + std::to_string( v ) );
      f = assignment[v] ? n.high : n.low;
    }
    return f == one();
  }

  /// Internal nodes reachable from `roots`, each counted once, in ascending index order.
  std::vector<node_ref> reachable( std::span<const node_ref> roots ) const
  {
    std::vector<char> seen( nodes_.size(), 0 );
    std::vector<node_ref> stack;
    std::vector<node_ref> out;
    for ( auto r : roots )
    {
      check( r );
      stack.push_back( r );
    }
    while ( !stack.empty() )
    {
      const auto f = stack.back();
      stack.pop_back();
      if ( is_terminal( f ) || seen[f.index] )
        continue;
      seen[f.index] = 1;
      out.push_back( f );
      stack.push_back( nodes_[f.index].high );
      stack.push_back( nodes_[f.index].low );
    }
    std::sort( out.begin(), out.end() );
    return out;
  }

  /// Number of non-terminal nodes reachable from f.
  std::size_t size( node_ref f ) const { return reachable( std::span<const node_ref>( &f, 1u ) ).size(); }
  std::size_t size( std::span<const node_ref> roots ) const { return reachable( roots ).size(); }

  /// Variables labelling reachable internal nodes, ascending.
  std::vector<std::uint32_t> support( node_ref f ) const
  {
    std::vector<char> in( var_count_, 0 );
    for ( auto n : reachable( std::span<const node_ref>( &f, 1u ) ) )
      in[var_at_level_[nodes_[n.index].level]] = 1;
    std::vector<std::uint32_t> vars;
    for ( std::uint32_t v = 0; v < var_count_; ++v )
      if ( in[v] )
        vars.push_back( v );
    return vars;
  }

  /// One line "id var high low" per reachable internal node, ascending id.
  std::string dump( node_ref f ) const
  {
    std::ostringstream os;
    for ( auto n : reachable( std::span<const node_ref>( &f, 1u ) ) )
    {
      const auto& nd = nodes_[n.index];
      os << n.index << ' ' << var_at_level_[nd.level] << ' ' << nd.high.index << ' ' << nd.low.index << '\n';
    }
    return os.str();
  }

private:
  void check( node_ref f ) const
  {
    if ( f.index >= nodes_.size() )
      throw std::invalid_argument( "node reference " + std::to_string( f.index ) + " is not valid in this manager" );
  }

  void check_var( std::uint32_t index ) const
  {
    if ( index >= var_count_ )
      throw std::out_of_range( "variable index " + std::to_string( index ) + " out of range" );
  }

  node_ref find_or_add( std::uint32_t level, node_ref high, node_ref low )
  {
    const detail::triple_key key{ level, high.index, low.index };
    if ( auto it = unique_.find( key ); it != unique_.end() )
      return node_ref{ it->second };
    if ( created_count() >= capacity_ )
      throw capacity_error( capacity_ );
    const auto index = static_cast<std::uint32_t>( nodes_.size() );
    nodes_.push_back( { level, high, low } );
    unique_.emplace( key, index );
    return node_ref{ index };
  }

  std::pair<node_ref, node_ref> split( node_ref f, std::uint32_t level ) const
  {
    const auto& n = nodes_[f.index];
    if ( n.level == level )
      return { n.high, n.low };
    return { f, f };
  }

  node_ref ite_rec( node_ref f, node_ref g, node_ref h )
  {
    if ( f == one() || g == h )
      return g;
    if ( f == zero() )
      return h;
    if ( g == one() && h == zero() )
      return f;

    const detail::triple_key key{ f.index, g.index, h.index };
    if ( auto it = computed_.find( key ); it != computed_.end() )
      return it->second;

    ++ite_calls_;
    const auto top = std::min( { nodes_[f.index].level, nodes_[g.index].level, nodes_[h.index].level } );
    const auto [f1, f0] = split( f, top );
    const auto [g1, g0] = split( g, top );
    const auto [h1, h0] = split( h, top );
    const auto t = ite_rec( f1, g1, h1 );
    const auto e = ite_rec( f0, g0, h0 );
    const auto r = t == e ? t : find_or_add( top, t, e );
    computed_.emplace( key, r );
    return r;
  }

  node_ref apply2( gate_kind kind, node_ref a, node_ref b )
  {
    switch ( kind )
    {
    case gate_kind::and_:
      return ite( a, b, zero() );
    case gate_kind::or_:
      return ite( a, one(), b );
    case gate_kind::nand:
      /* G is never inspected when F is the 0-terminal, so skip building INV(b) */
      return ite( a, a == zero() ? zero() : negate( b ), one() );
    case gate_kind::nor:
      return ite( a, zero(), a == one() ? zero() : negate( b ) );
    case gate_kind::xor_:
      return ite( a, negate( b ), b );
    default:
      throw std::invalid_argument( "not a binary gate kind" );
    }
  }

  node_ref cofactor_rec( node_ref f, std::uint32_t level, bool value,
                         std::unordered_map<std::uint32_t, node_ref>& memo )
  {
    const auto& n = nodes_[f.index];
    if ( n.level > level )
      return f;
    if ( n.level == level )
      return value ? n.high : n.low;
    if ( auto it = memo.find( f.index ); it != memo.end() )
      return it->second;
    const auto node_level = n.level;
    const auto hi = n.high;
    const auto lo = n.low;
    const auto h = cofactor_rec( hi, level, value, memo );
    const auto l = cofactor_rec( lo, level, value, memo );
    const auto r = h == l ? h : find_or_add( node_level, h, l );
    memo.emplace( f.index, r );
    return r;
  }

  std::uint32_t var_count_;
  std::vector<std::uint32_t> level_of_var_;
  std::vector<std::uint32_t> var_at_level_;
  std::size_t capacity_;
  std::vector<bdd_node> nodes_;
  std::unordered_map<detail::triple_key, std::uint32_t, detail::triple_hash> unique_;
  std::unordered_map<detail::triple_key, node_ref, detail::triple_hash> computed_;
  std::size_t ite_calls_{ 0u };
};

/// True if `a` in `ma` and `b` in `mb` are the same diagram node for node
/// (same variable labels and shape). Both managers must share the variable set.
inline bool structurally_equal( manager const& ma, node_ref a, manager const& mb, node_ref b )
{
  std::unordered_map<std::uint32_t, std::uint32_t> matched;
  std::unordered_map<std::uint32_t, std::uint32_t> matched_back;
  std::vector<std::pair<node_ref, node_ref>> stack{ { a, b } };
  while ( !stack.empty() )
  {
    const auto [x, y] = stack.back();
    stack.pop_back();
    if ( manager::is_terminal( x ) || manager::is_terminal( y ) )
    {
      if ( x != y )
        return false;
      continue;
    }
    if ( auto it = matched.find( x.index ); it != matched.end() )
    {
      if ( it->second != y.index )
        return false;
      continue;
    }
    if ( matched_back.contains( y.index ) || ma.var_of( x ) != mb.var_of( y ) )
      return false;
    matched.emplace( x.index, y.index );
    matched_back.emplace( y.index, x.index );
    stack.emplace_back( ma.high( x ), mb.high( y ) );
    stack.emplace_back( ma.low( x ), mb.low( y ) );
  }
  return true;
}

} // namespace polyver

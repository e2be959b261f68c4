#ifndef PARIKH_HARDNESS_HPP
#define PARIKH_HARDNESS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parikh/grammar.hpp"

namespace parikh {

struct Literal {
  bool universal = false;  // x_i when true, y_i otherwise
  int index = 0;
  bool negated = false;
};

// Clauses of at most three literals over universals x_0..x_{k-1} and
// existentials y_0..y_{l-1}.
struct CnfFormula {
  int num_x = 0;
  int num_y = 0;
  std::vector<std::vector<Literal>> clauses;
};

// Throws PreconditionError on clause width > 3 or out-of-range indices.
void validate(const CnfFormula& f);

/**
 * Line-based formula text: `c ...` comments, an optional header
 * `p qsat2 K L`, then one clause per line as literals `x0`, `-y1` with an
 * optional trailing `0`. A line holding only `0` is the empty clause.
 */
CnfFormula parse_formula(std::string_view text);
std::string format_formula(const CnfFormula& f);

struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;
  bool directed = false;

  int vertex_index(std::string_view name) const;
};

// `vertices: a b c`, optional `directed`, then edge lines `u v`; `#` comments.
Graph parse_graph(std::string_view text);

enum class HardVariant { full, stripped, cone };

Grammar gen_hard_grammar(int n, HardVariant variant);

struct QsatInclusion {
  Grammar g1;  // start S1
  Grammar g2;  // start S2
};

QsatInclusion encode_qsat2_inclusion(const CnfFormula& f);
Grammar encode_qsat2_universality(const CnfFormula& f);

struct MembershipInstance {
  Grammar grammar;
  TermVector vector;
};

// Requires num_x == 0.
MembershipInstance encode_3sat_membership(const CnfFormula& f);
// Variables are x_0.. then y_0..; primes are assigned in that order.
Grammar encode_3sat_unary_universality(const CnfFormula& f, const std::vector<std::int64_t>& primes);
MembershipInstance encode_hamiltonian_membership(const Graph& gr, std::string_view start_vertex);

// Direct solvers used to cross-check the reductions.
bool qbf_holds(const CnfFormula& f);
// Satisfiability with every variable existential.
bool cnf_satisfiable(const CnfFormula& f);
// Closed walk from start visiting every vertex exactly once; undirected edges
// can be walked both ways.
bool has_hamiltonian_circuit(const Graph& gr, std::string_view start_vertex);

// Vertices of the convex hull of integer points, counterclockwise from the
// lowest-then-leftmost point, collinear points dropped.
std::vector<std::pair<std::int64_t, std::int64_t>> convex_hull_vertices(
    std::vector<std::pair<std::int64_t, std::int64_t>> points);

}  // namespace parikh

#endif  // PARIKH_HARDNESS_HPP

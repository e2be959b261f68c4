#ifndef PARIKH_WINDOW_HPP
#define PARIKH_WINDOW_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "parikh/decomposition.hpp"
#include "parikh/membership.hpp"

namespace parikh {

enum class Engine {
  regular_dp,    // RegularMembership
  general_caps,  // GeneralMembership
  oracle,        // oracle_language at a fixed derivation depth
  closure,       // oracle_window_closure
};

enum class CompareMode { inclusion, equivalence, disjointness };
enum class Ambient { naturals, integers };

std::string_view to_string(Engine e);
std::optional<Engine> parse_engine(std::string_view s);

struct EngineOptions {
  Engine engine = Engine::oracle;
  std::optional<std::int64_t> bound;  // regular_dp; defaults to B_G
  GeneralCaps caps;                   // general_caps
  std::int64_t oracle_depth = 14;     // oracle
};

// Membership test for one grammar restricted to vectors with norm <= window.
class WindowMembership {
 public:
  WindowMembership(const Grammar& g, std::int64_t window, const EngineOptions& opts);
  ~WindowMembership();
  WindowMembership(WindowMembership&&) noexcept;

  Answer query(const TermVector& v) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class WindowResult { holds, fails, unknown };
std::string_view to_string(WindowResult r);

struct WindowVerdict {
  WindowResult result = WindowResult::unknown;
  std::optional<TermVector> witness;  // first counterexample, or first undecided vector
  std::int64_t window = 0;
};

struct BoundReport {
  BGBound bg1;
  BGBound bg2;
  std::string note;
};

BoundReport window_bound_report(const Grammar& g1, const Grammar& g2);

// Every vector of the box, first coordinate most significant.
void for_each_in_box(std::size_t dim, std::int64_t lo, std::int64_t hi,
                     const std::function<bool(const TermVector&)>& visit);

WindowVerdict compare_within_window(const Grammar& g1, const Grammar& g2, std::int64_t window, CompareMode mode,
                                    const EngineOptions& opts);
WindowVerdict universality_within_window(const Grammar& g, std::int64_t window, Ambient ambient,
                                         const EngineOptions& opts);

}  // namespace parikh

#endif  // PARIKH_WINDOW_HPP

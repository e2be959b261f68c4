#include "parikh/window.hpp"

#include "parikh/errors.hpp"

namespace parikh {

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::regular_dp: return "regular-dp";
    case Engine::general_caps: return "general-caps";
    case Engine::oracle: return "oracle";
    case Engine::closure: return "closure";
  }
  return "?";
}

std::optional<Engine> parse_engine(std::string_view s) {
  if (s == "regular-dp") return Engine::regular_dp;
  if (s == "general-caps") return Engine::general_caps;
  if (s == "oracle") return Engine::oracle;
  if (s == "closure") return Engine::closure;
  return std::nullopt;
}

std::string_view to_string(WindowResult r) {
  switch (r) {
    case WindowResult::holds: return "true";
    case WindowResult::fails: return "false";
    case WindowResult::unknown: return "unknown";
  }
  return "?";
}

struct WindowMembership::Impl {
  std::optional<RegularMembership> regular;
  std::optional<GeneralMembership> general;
  std::set<TermVector> listed;
  bool listed_exact = true;
};

WindowMembership::WindowMembership(const Grammar& g, std::int64_t window, const EngineOptions& opts)
    : impl_(std::make_unique<Impl>()) {
  switch (opts.engine) {
    case Engine::regular_dp:
      impl_->regular.emplace(g, opts.bound);
      break;
    case Engine::general_caps:
      impl_->general.emplace(g, opts.caps);
      break;
    case Engine::oracle:
      impl_->listed = oracle_language(g, opts.oracle_depth, window);
      break;
    case Engine::closure: {
      auto c = oracle_window_closure(g, window);
      impl_->listed = std::move(c.vectors);
      impl_->listed_exact = c.exact;
      break;
    }
  }
}

WindowMembership::~WindowMembership() = default;
WindowMembership::WindowMembership(WindowMembership&&) noexcept = default;

Answer WindowMembership::query(const TermVector& v) const {
  if (impl_->regular) return impl_->regular->query(v).answer;
  if (impl_->general) return impl_->general->query(v).answer;
  if (impl_->listed.contains(v)) return Answer::yes;
  return impl_->listed_exact ? Answer::no : Answer::unknown;
}

BoundReport window_bound_report(const Grammar& g1, const Grammar& g2) {
  if (g1.alphabet != g2.alphabet) throw PreconditionError("window_bound_report: alphabets differ");
  BoundReport r{compute_bg(g1), compute_bg(g2), {}};
  r.note =
      "the window that makes inclusion checks complete is only known up to an unspecified constant factor; "
      "B_G, gamma(N) and h(A, gamma(N)) are its computable ingredients, so pass --window explicitly";
  return r;
}

void for_each_in_box(std::size_t dim, std::int64_t lo, std::int64_t hi,
                     const std::function<bool(const TermVector&)>& visit) {
  if (lo > hi) return;
  TermVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = lo;
  for (;;) {
    if (!visit(v)) return;
    std::size_t i = dim;
    while (i > 0 && v[i - 1] == hi) {
      v[i - 1] = lo;
      --i;
    }
    if (i == 0) return;
    v[i - 1] += 1;
  }
}

namespace {

enum class Tri { yes, no, unknown };

Tri tri(Answer a) {
  switch (a) {
    case Answer::yes: return Tri::yes;
    case Answer::no:
    case Answer::bounded_no: return Tri::no;
    case Answer::unknown: return Tri::unknown;
  }
  return Tri::unknown;
}

// Sweeps the box; `judge` returns fails/unknown/holds for a single vector.
WindowVerdict sweep(std::size_t dim, std::int64_t lo, std::int64_t hi, std::int64_t window,
                    const std::function<WindowResult(const TermVector&)>& judge) {
  WindowVerdict out{WindowResult::holds, std::nullopt, window};
  for_each_in_box(dim, lo, hi, [&](const TermVector& v) {
    const auto r = judge(v);
    if (r == WindowResult::fails) {
      out = {WindowResult::fails, v, window};
      return false;
    }
    if (r == WindowResult::unknown && out.result == WindowResult::holds) out = {WindowResult::unknown, v, window};
    return true;
  });
  return out;
}

WindowResult included_at(Tri a, Tri b) {
  if (a == Tri::no || b == Tri::yes) return WindowResult::holds;
  if (a == Tri::yes && b == Tri::no) return WindowResult::fails;
  return WindowResult::unknown;
}

}  // namespace

WindowVerdict compare_within_window(const Grammar& g1, const Grammar& g2, std::int64_t window, CompareMode mode,
                                    const EngineOptions& opts) {
  if (g1.alphabet != g2.alphabet) throw PreconditionError("compare: alphabets differ");
  if (window < 0) throw PreconditionError("compare: window must be nonnegative");
  const WindowMembership m1(g1, window, opts);
  const WindowMembership m2(g2, window, opts);
  return sweep(g1.num_terminals(), -window, window, window, [&](const TermVector& v) {
    const Tri a = tri(m1.query(v));
    const Tri b = tri(m2.query(v));
    switch (mode) {
      case CompareMode::inclusion:
        return included_at(a, b);
      case CompareMode::equivalence: {
        const auto fwd = included_at(a, b);
        const auto bwd = included_at(b, a);
        if (fwd == WindowResult::fails || bwd == WindowResult::fails) return WindowResult::fails;
        if (fwd == WindowResult::unknown || bwd == WindowResult::unknown) return WindowResult::unknown;
        return WindowResult::holds;
      }
      case CompareMode::disjointness:
        if (a == Tri::yes && b == Tri::yes) return WindowResult::fails;
        if (a == Tri::no || b == Tri::no) return WindowResult::holds;
        return WindowResult::unknown;
    }
    return WindowResult::unknown;
  });
}

WindowVerdict universality_within_window(const Grammar& g, std::int64_t window, Ambient ambient,
                                         const EngineOptions& opts) {
  if (window < 0) throw PreconditionError("universal: window must be nonnegative");
  const WindowMembership m(g, window, opts);
  const std::int64_t lo = ambient == Ambient::naturals ? 0 : -window;
  return sweep(g.num_terminals(), lo, window, window, [&](const TermVector& v) {
    switch (tri(m.query(v))) {
      case Tri::yes: return WindowResult::holds;
      case Tri::no: return WindowResult::fails;
      case Tri::unknown: return WindowResult::unknown;
    }
    return WindowResult::unknown;
  });
}

}  // namespace parikh

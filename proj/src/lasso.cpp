#include "gfgq/lasso.hpp"

#include <algorithm>

namespace gfgq {

int Alphabet::index_of(const Proposition& p) const {
  auto it = std::lower_bound(props.begin(), props.end(), p);
  if (it == props.end() || !(*it == p))
    throw std::invalid_argument("proposition '" + p.name + "' not in alphabet");
  return int(it - props.begin());
}

namespace {

// positional satisfaction over the lasso graph; least fixpoint for U,
// greatest for R, evaluated bottom-up over subformulas
struct Eval {
  const Alphabet& ab;
  const LassoWord& w;
  size_t n;

  Eval(const Alphabet& a, const LassoWord& ww) : ab(a), w(ww), n(ww.total()) {}

  size_t next(size_t i) const {
    size_t j = i + 1;
    return j < n ? j : w.stem.size();  // wrap into loop
  }

  std::vector<bool> run(const LtlPtr& f) {
    std::vector<bool> r(n);
    switch (f->op) {
      case LtlOp::True: r.assign(n, true); break;
      case LtlOp::False: r.assign(n, false); break;
      case LtlOp::Atom: {
        int b = ab.index_of(f->atom);
        for (size_t i = 0; i < n; i++) r[i] = letter_bit(w.at(i), b);
        break;
      }
      case LtlOp::Not: {
        auto a = run(f->lhs);
        for (size_t i = 0; i < n; i++) r[i] = !a[i];
        break;
      }
      case LtlOp::And: {
        auto a = run(f->lhs), b = run(f->rhs);
        for (size_t i = 0; i < n; i++) r[i] = a[i] && b[i];
        break;
      }
      case LtlOp::Or: {
        auto a = run(f->lhs), b = run(f->rhs);
        for (size_t i = 0; i < n; i++) r[i] = a[i] || b[i];
        break;
      }
      case LtlOp::Implies: {
        auto a = run(f->lhs), b = run(f->rhs);
        for (size_t i = 0; i < n; i++) r[i] = !a[i] || b[i];
        break;
      }
      case LtlOp::Iff: {
        auto a = run(f->lhs), b = run(f->rhs);
        for (size_t i = 0; i < n; i++) r[i] = a[i] == b[i];
        break;
      }
      case LtlOp::Next: {
        auto a = run(f->lhs);
        for (size_t i = 0; i < n; i++) r[i] = a[next(i)];
        break;
      }
      case LtlOp::Future: return run(ltl_until(ltl_true(), f->lhs));
      case LtlOp::Globally: return run(ltl_release(ltl_false(), f->lhs));
      case LtlOp::Until: {
        auto a = run(f->lhs), b = run(f->rhs);
        r.assign(n, false);  // lfp
        for (size_t it = 0; it <= n; it++) {
          bool changed = false;
          for (size_t i = n; i-- > 0;) {
            bool v = b[i] || (a[i] && r[next(i)]);
            if (v != r[i]) { r[i] = v; changed = true; }
          }
          if (!changed) break;
        }
        break;
      }
      case LtlOp::Release: {
        auto a = run(f->lhs), b = run(f->rhs);
        r.assign(n, true);  // gfp
        for (size_t it = 0; it <= n; it++) {
          bool changed = false;
          for (size_t i = n; i-- > 0;) {
            bool v = b[i] && (a[i] || r[next(i)]);
            if (v != r[i]) { r[i] = v; changed = true; }
          }
          if (!changed) break;
        }
        break;
      }
    }
    return r;
  }
};

}  // namespace

std::vector<bool> eval_ltl_lasso_all(const LtlPtr& f, const Alphabet& ab,
                                     const LassoWord& w) {
  if (w.loop.empty()) throw std::invalid_argument("lasso loop must be non-empty");
  return Eval(ab, w).run(f);
}

bool eval_ltl_lasso(const LtlPtr& f, const Alphabet& ab, const LassoWord& w) {
  return eval_ltl_lasso_all(f, ab, w)[0];
}

}  // namespace gfgq

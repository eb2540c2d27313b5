#include <algorithm>
#include <optional>
#include <stdexcept>

#include "sflow/scarf.hpp"

namespace sflow {

namespace {

// Tableau columns: slack i at i, instance column c at m + c.
class Pivoter {
 public:
  explicit Pivoter(const ScarfInstance& inst) : m_(inst.rows.size()), width_(m_ + inst.cols.size()) {
    tab_.assign(m_, std::vector<Rational>(width_, Rational(0)));
    rhs_.resize(m_);
    util_.assign(m_, std::vector<long>(width_, 0));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const ScarfRow& row = inst.rows[i];
      tab_[i][i] = 1;
      rhs_[i] = row.b;
      basis_[i] = i;
      for (const auto& [c, a] : row.entries) tab_[i][m_ + c] = a;
      // Own slack lowest, ranked support above it, everything else on top.
      const long support = static_cast<long>(row.pref.size());
      for (std::size_t p = 0; p < row.pref.size(); ++p) util_[i][m_ + row.pref[p]] = support - static_cast<long>(p);
      long top = support + 1;
      for (std::size_t c = 0; c < inst.cols.size(); ++c)
        if (util_[i][m_ + c] == 0) util_[i][m_ + c] = top++;
      for (std::size_t j = 0; j < m_; ++j)
        if (j != i) util_[i][j] = top++;
    }
  }

  std::optional<ScarfPoint> run(std::size_t max_pivots) {
    if (m_ == 0) return ScarfPoint(width_, Rational(0));
    std::vector<std::size_t> ord(m_);
    for (std::size_t i = 1; i < m_; ++i) ord[i - 1] = i;
    std::size_t best = 0;
    for (std::size_t j = 1; j < width_; ++j)
      if (j >= m_ && (best == 0 || util_[0][j] > util_[0][best])) best = j;
    if (best == 0) return std::nullopt;
    ord[m_ - 1] = best;

    std::size_t entering = best;
    for (std::size_t step = 0; step < max_pivots; ++step) {
      std::size_t leaving = cardinal_pivot(entering);
      if (leaving == 0) return point();
      entering = ordinal_pivot(ord, leaving);
      if (entering == 0) return point();
    }
    return std::nullopt;
  }

 private:
  // Lexicographic ratio test against b + (eps, eps^2, ...).
  std::size_t cardinal_pivot(std::size_t col) {
    std::optional<std::size_t> pick;
    for (std::size_t r = 0; r < m_; ++r) {
      if (tab_[r][col] <= 0) continue;
      if (!pick || lex_less(r, *pick, col)) pick = r;
    }
    if (!pick) throw std::logic_error("pivot column is unbounded");
    const std::size_t r = *pick;
    const std::size_t out = basis_[r];
    Rational p = tab_[r][col];
    for (Rational& v : tab_[r]) v /= p;
    rhs_[r] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || tab_[i][col] == 0) continue;
      Rational k = tab_[i][col];
      for (std::size_t j = 0; j < width_; ++j)
        if (tab_[r][j] != 0) tab_[i][j] -= k * tab_[r][j];
      rhs_[i] -= k * rhs_[r];
    }
    basis_[r] = col;
    return out;
  }

  bool lex_less(std::size_t a, std::size_t b, std::size_t col) const {
    const Rational& pa = tab_[a][col];
    const Rational& pb = tab_[b][col];
    Rational x = rhs_[a] / pa, y = rhs_[b] / pb;
    if (x != y) return x < y;
    for (std::size_t j = 0; j < m_; ++j) {
      x = tab_[a][j] / pa;
      y = tab_[b][j] / pb;
      if (x != y) return x < y;
    }
    return false;
  }

  std::size_t row_min(const std::vector<std::size_t>& cols, std::size_t i, std::size_t skip) const {
    std::size_t arg = width_;
    for (std::size_t c : cols)
      if (c != skip && (arg == width_ || util_[i][c] < util_[i][arg])) arg = c;
    return arg;
  }

  // Drops `out` from the ordinal basis and returns the column that replaces it.
  std::size_t ordinal_pivot(std::vector<std::size_t>& ord, std::size_t out) {
    std::vector<std::size_t> before(m_), after(m_);
    std::size_t freed = m_;
    for (std::size_t i = 0; i < m_; ++i) {
      before[i] = row_min(ord, i, width_);
      after[i] = row_min(ord, i, out);
      if (before[i] == out) freed = i;
    }
    if (freed == m_) throw std::logic_error("ordinal basis is degenerate");
    std::size_t twice = after[freed];
    std::size_t row = m_;
    for (std::size_t i = 0; i < m_; ++i)
      if (i != freed && before[i] == twice) row = i;
    if (row == m_) throw std::logic_error("ordinal basis is degenerate");

    std::size_t pick = width_;
    for (std::size_t j = 0; j < width_; ++j) {
      if (j == out || std::find(ord.begin(), ord.end(), j) != ord.end()) continue;
      bool beats = true;
      for (std::size_t i = 0; i < m_ && beats; ++i)
        if (i != row && util_[i][j] <= util_[i][after[i]]) beats = false;
      if (beats && (pick == width_ || util_[row][j] > util_[row][pick])) pick = j;
    }
    if (pick == width_) throw std::logic_error("ordinal pivot found no column");
    std::replace(ord.begin(), ord.end(), out, pick);
    return pick;
  }

  ScarfPoint point() const {
    ScarfPoint x(width_ - m_, Rational(0));
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] >= m_) x[basis_[r] - m_] = rhs_[r];
    return x;
  }

  std::size_t m_, width_;
  std::vector<std::vector<Rational>> tab_;
  std::vector<Rational> rhs_;
  std::vector<std::vector<long>> util_;
  std::vector<std::size_t> basis_;
};

}  // namespace

std::optional<ScarfPoint> scarf_pivot(const ScarfInstance& inst, std::size_t max_pivots) {
  return Pivoter(inst).run(max_pivots);
}

}  // namespace sflow

// Copyright 2026 The onoff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "onoff/neyman.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "onoff/errors.h"
#include "onoff/numerics.h"
#include "onoff/parallel.h"

namespace onoff {
namespace {

constexpr double kBeltTailLimit = 1e-9;
constexpr double kBestSignalTolerance = 1e-6;
constexpr double kDefaultBeltStep = 0.005;

double LogLikelihood(std::int64_t n, double s, const KnownBackgroundModel& m,
                     BeltLikelihood tag) {
  if (tag == BeltLikelihood::kExact || m.sigma_b == 0.0) {
    return LogPoisson(n, s + m.b);
  }
  return LogMarginalKnownBkg(CountingObservation{n}, s, m);
}

// Mean used to bound the count range at signal s.
double UpperMean(double s, const KnownBackgroundModel& m) {
  return s + m.b + 8.0 * m.sigma_b;
}

// P(N > n) for N ~ Poisson(mean).
double PoissonUpperTail(std::int64_t n, double mean) {
  if (mean <= 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(n) + 1.0, mean);
}

std::int64_t SafeCountLimit(double mean) {
  auto n = static_cast<std::int64_t>(std::ceil(mean));
  while (PoissonUpperTail(n, mean) > 1e-12) {
    n += std::max<std::int64_t>(1, static_cast<std::int64_t>(std::sqrt(mean)));
  }
  return n;
}

std::string Format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Log-probabilities of all counts 0..n_top at one signal value. The marginal
// case integrates over b' with a fixed Gauss-Legendre rule shared by every
// count in the row, which is what makes marginal belts affordable.
class RowLikelihood {
 public:
  RowLikelihood(const KnownBackgroundModel& m, BeltLikelihood tag) : model_(m) {
    if (tag == BeltLikelihood::kExact || m.sigma_b == 0.0) return;
    marginal_ = true;
    const double sb = m.sigma_b;
    const double lo =
        std::max(0.0, std::min(m.b - 12.0 * sb, m.b - sb * sb - 6.0 * sb));
    const double hi = m.b + 12.0 * sb;
    const double h = std::min(sb, 1.0 + 0.5 * std::sqrt(m.b));
    const int panels =
        std::clamp(static_cast<int>(std::ceil((hi - lo) / h)), 1, 4000);
    const double width = (hi - lo) / panels;
    using Rule = boost::math::quadrature::gauss<double, 8>;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + width * (p + 0.5);
      // The rule stores non-negative abscissae only.
      for (std::size_t k = 0; k < Rule::abscissa().size(); ++k) {
        const double x = Rule::abscissa()[k];
        const double w = Rule::weights()[k] * 0.5 * width;
        for (double sign : {-1.0, 1.0}) {
          if (x == 0.0 && sign > 0.0) continue;
          const double node = mid + sign * 0.5 * width * x;
          nodes_.push_back(node);
          log_weights_.push_back(std::log(w) + LogGaussian(node, m.b, sb));
        }
      }
    }
  }

  void Fill(double s, std::int64_t n_top, std::vector<double>* out) const {
    out->resize(static_cast<std::size_t>(n_top + 1));
    if (!marginal_) {
      for (std::int64_t n = 0; n <= n_top; ++n) {
        (*out)[static_cast<std::size_t>(n)] = LogPoisson(n, s + model_.b);
      }
      return;
    }
    const std::size_t k = nodes_.size();
    std::vector<double> log_mu(k);
    std::vector<double> base(k);
    std::vector<double> t(k);
    for (std::size_t j = 0; j < k; ++j) {
      const double mu = s + nodes_[j];
      log_mu[j] = std::log(mu);
      base[j] = log_weights_[j] - mu;
    }
    for (std::int64_t n = 0; n <= n_top; ++n) {
      const double nd = static_cast<double>(n);
      double peak = kNegInf;
      for (std::size_t j = 0; j < k; ++j) {
        t[j] = base[j] + nd * log_mu[j];
        peak = std::max(peak, t[j]);
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const double d = t[j] - peak;
        if (d > -40.0) sum += std::exp(d);
      }
      (*out)[static_cast<std::size_t>(n)] =
          peak + std::log(sum) - LogFactorial(n);
    }
  }

 private:
  KnownBackgroundModel model_;
  bool marginal_ = false;
  std::vector<double> nodes_;
  std::vector<double> log_weights_;
};

BeltRow BuildRow(double s, const KnownBackgroundModel& model,
                 const RowLikelihood& like, double cl, std::int64_t n_max,
                 const std::vector<double>& best) {
  const double mean = s + model.b;
  const double spread = std::sqrt(mean + model.sigma_b * model.sigma_b + 1.0);
  const auto n_top = std::min<std::int64_t>(
      n_max, static_cast<std::int64_t>(std::ceil(UpperMean(s, model) +
                                                 12.0 * spread + 20.0)));

  struct Entry {
    std::int64_t n;
    double log_p;
    double log_rank;
  };
  std::vector<double> log_p;
  like.Fill(s, n_top, &log_p);
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(n_top + 1));
  for (std::int64_t n = 0; n <= n_top; ++n) {
    const double lp = log_p[static_cast<std::size_t>(n)];
    if (!std::isfinite(lp)) continue;
    entries.push_back({n, lp, lp - best[static_cast<std::size_t>(n)]});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) {
                     return a.log_rank > b.log_rank;
                   });

  BeltRow row;
  row.s = s;
  std::vector<std::int64_t> accepted;
  double mass = 0.0;
  for (const auto& e : entries) {
    mass += std::exp(e.log_p);
    accepted.push_back(e.n);
    if (mass >= cl) break;
  }
  std::sort(accepted.begin(), accepted.end());
  row.mass = mass;
  if (!accepted.empty()) {
    row.n_lo = accepted.front();
    row.n_hi = accepted.back();
    row.contiguous =
        static_cast<std::int64_t>(accepted.size()) == row.n_hi - row.n_lo + 1;
    if (!row.contiguous) row.accepted = std::move(accepted);
  } else {
    row.n_lo = 0;
    row.n_hi = -1;
  }
  return row;
}

// Upper end of the exact interval for n_obs at background b, scanning the
// grid k * step downwards from s_top. Empty if no row in [0, s_top] accepts.
// The caller must pick s_top above the answer; the top row is checked for
// that and the scan restarts higher when it accepts.
std::optional<double> ScanUpperEnd(std::int64_t n_obs, double b, double cl,
                                   double step, double s_top) {
  const KnownBackgroundModel model{b, 0.0};
  for (;;) {
    const auto k_top = static_cast<std::int64_t>(std::ceil(s_top / step));
    const double mean = step * static_cast<double>(k_top) + b;
    const auto n_cap = static_cast<std::int64_t>(
        std::ceil(mean + 12.0 * std::sqrt(mean + 1.0) + 20.0));
    std::vector<double> best(static_cast<std::size_t>(n_cap + 1));
    for (std::int64_t n = 0; n <= n_cap; ++n) {
      best[static_cast<std::size_t>(n)] =
          LogPoisson(n, std::max(static_cast<double>(n), b));
    }
    const RowLikelihood like(model, BeltLikelihood::kExact);
    bool top = true;
    for (std::int64_t k = k_top; k >= 0; --k) {
      const double s = step * static_cast<double>(k);
      if (BuildRow(s, model, like, cl, n_cap, best)
              .Accepts(n_obs)) {
        if (!top) return s;
        break;
      }
      top = false;
    }
    if (top) {
      s_top = 2.0 * s_top + 1.0;
      continue;
    }
    return std::nullopt;
  }
}

std::string CacheKey(const KnownBackgroundModel& model, BeltLikelihood tag,
                     double cl, const ScanGrid& g, std::int64_t n_max) {
  std::ostringstream key;
  key << ToString(tag) << '|' << Format(model.b) << '|' << Format(model.sigma_b)
      << '|' << Format(cl) << '|' << Format(g.s_min) << '|' << Format(g.s_max)
      << '|' << Format(g.step) << '|' << n_max;
  return key.str();
}

double ParseDouble(const std::string& text) {
  std::size_t pos = 0;
  const double v = std::stod(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("bad number: " + text);
  return v;
}

std::int64_t ParseInt(const std::string& text) {
  std::int64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad integer: " + text);
  }
  return v;
}

std::vector<std::string> Split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string_view ToString(BeltLikelihood tag) {
  return tag == BeltLikelihood::kExact ? "exact" : "marginal";
}

double FcBestSignal(std::int64_t n, const KnownBackgroundModel& model,
                    BeltLikelihood tag) {
  const double nd = static_cast<double>(n);
  if (tag == BeltLikelihood::kExact || model.sigma_b == 0.0) {
    return std::max(0.0, nd - model.b);
  }
  const double lo = std::max(
      0.0, nd - model.b - 8.0 * model.sigma_b - 8.0 * std::sqrt(nd));
  const double hi = std::max(lo, nd);
  const auto best = GoldenSectionMaximize(
      [&](double s) { return LogLikelihood(n, s, model, tag); }, lo, hi,
      kBestSignalTolerance);
  return best.x;
}

double FcRank(std::int64_t n, double s, const KnownBackgroundModel& model,
              BeltLikelihood tag) {
  if (!(s >= 0.0)) throw std::domain_error("FcRank: negative signal");
  const double s_hat = FcBestSignal(n, model, tag);
  const double num = LogLikelihood(n, s, model, tag);
  const double den = LogLikelihood(n, s_hat, model, tag);
  if (!std::isfinite(num)) return 0.0;
  return std::min(1.0, std::exp(num - den));
}

bool BeltRow::Accepts(std::int64_t n) const {
  if (n < n_lo || n > n_hi) return false;
  if (contiguous) return true;
  return std::binary_search(accepted.begin(), accepted.end(), n);
}

bool ConfidenceBelt::AllContiguous() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const BeltRow& r) { return r.contiguous; });
}

std::optional<std::size_t> ConfidenceBelt::FirstMonotonicityViolation() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].n_lo < rows[i - 1].n_lo || rows[i].n_hi < rows[i - 1].n_hi) {
      return i;
    }
  }
  return std::nullopt;
}

ScanGrid DefaultBeltGrid(std::int64_t n_obs, double b) {
  const double n = static_cast<double>(n_obs);
  ScanGrid g;
  g.s_min = 0.0;
  g.s_max = std::max(10.0, n - b + 10.0 * std::sqrt(n + 1.0) + 25.0);
  g.step = kDefaultBeltStep;
  return g;
}

ConfidenceBelt BuildBelt(const KnownBackgroundModel& model, BeltLikelihood tag,
                         double cl, const ScanGrid& s_grid,
                         const BeltOptions& opts) {
  model.Validate();
  s_grid.Validate();
  if (!(cl > 0.0 && cl < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
  if (s_grid.s_min < 0.0) {
    throw std::invalid_argument("belt grid must start at s >= 0");
  }
  const std::size_t points = s_grid.Points();
  const double top_mean = UpperMean(s_grid.At(points - 1), model);

  ConfidenceBelt belt;
  belt.likelihood = tag;
  belt.model = model;
  belt.cl = cl;
  belt.s_grid = s_grid;
  belt.n_max = opts.n_max > 0 ? opts.n_max : SafeCountLimit(top_mean);
  const double tail = PoissonUpperTail(belt.n_max, top_mean);
  if (tail > kBeltTailLimit) {
    std::ostringstream msg;
    msg << "BuildBelt: n_max = " << belt.n_max << " leaves probability " << tail
        << " above it at s = " << s_grid.At(points - 1)
        << "; increase n_max to at least " << SafeCountLimit(top_mean);
    throw NumericalError(msg.str());
  }

  std::vector<double> best(static_cast<std::size_t>(belt.n_max + 1));
  ParallelFor(best.size(), opts.threads, [&](std::size_t n) {
    const auto count = static_cast<std::int64_t>(n);
    best[n] = LogLikelihood(count, FcBestSignal(count, model, tag), model, tag);
  });

  const RowLikelihood like(model, tag);
  belt.rows.resize(points);
  ParallelFor(points, opts.threads, [&](std::size_t i) {
    belt.rows[i] = BuildRow(s_grid.At(i), model, like, cl, belt.n_max, best);
  });
  return belt;
}

IntervalResult FcInterval(std::int64_t n_obs, const ConfidenceBelt& belt) {
  if (n_obs < 0 || n_obs > belt.n_max) {
    throw std::invalid_argument("FcInterval: n_obs outside the belt's count range");
  }
  std::optional<std::size_t> first;
  std::size_t last = 0;
  std::size_t hits = 0;
  double min_mass = 1.0;
  for (std::size_t i = 0; i < belt.rows.size(); ++i) {
    min_mass = std::min(min_mass, belt.rows[i].mass);
    if (!belt.rows[i].Accepts(n_obs)) continue;
    if (!first) first = i;
    last = i;
    ++hits;
  }
  if (!first) {
    std::ostringstream msg;
    msg << "FcInterval: no signal in [" << belt.s_grid.s_min << ", "
        << belt.s_grid.s_max << "] accepts n_obs = " << n_obs
        << "; extend the signal grid";
    throw NumericalError(msg.str());
  }
  IntervalResult r;
  r.method = belt.likelihood == BeltLikelihood::kExact ? Method::kFc
                                                        : Method::kFcMarginal;
  r.cl = belt.cl;
  r.lower = belt.rows[*first].s;
  r.upper = belt.rows[last].s;
  r.achieved_mass = min_mass;
  auto& d = r.diagnostics;
  d.grid_points = belt.rows.size();
  d.grid_step = belt.s_grid.step;
  d.grid_max = belt.rows.back().s;
  if (hits != last - *first + 1) d.Flag(kFlagNonContiguous);
  if (last + 1 == belt.rows.size()) d.Flag(kFlagGridEdge);
  return r;
}

double FcUpperEnvelope(std::int64_t n_obs, double b, double cl, double step,
                       double start, double width) {
  if (!(width > 0.0)) return start;
  constexpr double kSample = 0.05;
  constexpr double kMargin = 1.0;
  constexpr int kBisections = 14;
  auto upper = [&](double bp, double hint) {
    return ScanUpperEnd(n_obs, bp, cl, step, hint + kMargin).value_or(-1.0);
  };
  double best = start;
  double prev_b = b;
  double prev = start;
  const int samples = static_cast<int>(std::ceil(width / kSample));
  for (int k = 1; k <= samples; ++k) {
    const double bk = b + width * k / samples;
    const double cur = upper(bk, std::max(prev, best));
    // The upper end falls smoothly between upward jumps; the peak of a tooth
    // sits just past its jump.
    if (cur > prev + 0.5 * step) {
      double lo = prev_b;
      double hi = bk;
      double at_hi = cur;
      for (int i = 0; i < kBisections; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = upper(mid, best);
        if (v > prev + 0.5 * step) {
          hi = mid;
          at_hi = v;
        } else {
          lo = mid;
        }
      }
      best = std::max(best, at_hi);
    }
    best = std::max(best, cur);
    prev_b = bk;
    prev = cur;
  }
  return best;
}

std::shared_ptr<const ConfidenceBelt> BeltCache::Get(
    const KnownBackgroundModel& model, BeltLikelihood tag, double cl,
    const ScanGrid& s_grid, const BeltOptions& opts) {
  const std::string key = CacheKey(model, tag, cl, s_grid, opts.n_max);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = belts_.find(key);
    if (it != belts_.end()) return it->second;
  }
  auto belt = std::make_shared<const ConfidenceBelt>(
      BuildBelt(model, tag, cl, s_grid, opts));
  std::lock_guard<std::mutex> lock(mutex_);
  return belts_.emplace(key, std::move(belt)).first->second;
}

std::size_t BeltCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return belts_.size();
}

namespace {

// The wrappers pick the count range from the grid, so a count above it means
// the grid stops short of every signal that could accept it.
IntervalResult IntervalOnBuiltBelt(std::int64_t n_obs,
                                   const ConfidenceBelt& belt) {
  if (n_obs > belt.n_max) {
    std::ostringstream msg;
    msg << "FcInterval: n_obs = " << n_obs << " lies above every count the belt"
        << " over [" << belt.s_grid.s_min << ", " << belt.s_grid.s_max
        << "] can accept; extend the signal grid";
    throw NumericalError(msg.str());
  }
  return FcInterval(n_obs, belt);
}

}  // namespace

IntervalResult FcExactInterval(std::int64_t n_obs, double b, double cl,
                               const std::optional<ScanGrid>& grid,
                               BeltCache* cache, const BeltOptions& opts) {
  const KnownBackgroundModel model{b, 0.0};
  const ScanGrid g = grid.value_or(DefaultBeltGrid(n_obs, b));
  IntervalResult r =
      cache != nullptr
          ? IntervalOnBuiltBelt(
                n_obs, *cache->Get(model, BeltLikelihood::kExact, cl, g, opts))
          : IntervalOnBuiltBelt(
                n_obs, BuildBelt(model, BeltLikelihood::kExact, cl, g, opts));
  if (opts.background_envelope && g.s_min == 0.0 &&
      !r.diagnostics.HasFlag(kFlagGridEdge)) {
    const double env =
        FcUpperEnvelope(n_obs, b, cl, g.step, r.upper, opts.envelope_width);
    if (env > r.upper) {
      r.diagnostics.construction_upper = r.upper;
      r.upper = env;
    }
  }
  return r;
}

IntervalResult FcMarginalInterval(std::int64_t n_obs,
                                  const KnownBackgroundModel& model, double cl,
                                  const std::optional<ScanGrid>& grid,
                                  BeltCache* cache, const BeltOptions& opts) {
  const ScanGrid g = grid.value_or(DefaultBeltGrid(n_obs, model.b));
  if (cache != nullptr) {
    return IntervalOnBuiltBelt(
        n_obs, *cache->Get(model, BeltLikelihood::kMarginal, cl, g, opts));
  }
  return IntervalOnBuiltBelt(
      n_obs, BuildBelt(model, BeltLikelihood::kMarginal, cl, g, opts));
}

void WriteBelt(std::ostream& out, const ConfidenceBelt& belt) {
  out << "# onoff confidence belt\n";
  out << "# likelihood=" << ToString(belt.likelihood) << '\n';
  out << "# b=" << Format(belt.model.b) << '\n';
  out << "# sigma_b=" << Format(belt.model.sigma_b) << '\n';
  out << "# cl=" << Format(belt.cl) << '\n';
  out << "# s_min=" << Format(belt.s_grid.s_min) << '\n';
  out << "# s_max=" << Format(belt.s_grid.s_max) << '\n';
  out << "# step=" << Format(belt.s_grid.step) << '\n';
  out << "# n_max=" << belt.n_max << '\n';
  out << "s,n_lo,n_hi,mass,contiguous,accepted\n";
  for (const auto& row : belt.rows) {
    out << Format(row.s) << ',' << row.n_lo << ',' << row.n_hi << ','
        << Format(row.mass) << ',' << (row.contiguous ? 1 : 0) << ',';
    for (std::size_t i = 0; i < row.accepted.size(); ++i) {
      if (i > 0) out << ';';
      out << row.accepted[i];
    }
    out << '\n';
  }
}

ConfidenceBelt ReadBelt(std::istream& in) {
  ConfidenceBelt belt;
  std::string line;
  bool header_seen = false;
  std::map<std::string, std::string> meta;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen) {
      if (line.rfind("s,n_lo,n_hi", 0) != 0) {
        throw std::invalid_argument("ReadBelt: missing column header");
      }
      header_seen = true;
      continue;
    }
    const auto cols = Split(line, ',');
    if (cols.size() != 6) {
      throw std::invalid_argument("ReadBelt: expected 6 columns: " + line);
    }
    BeltRow row;
    row.s = ParseDouble(cols[0]);
    row.n_lo = ParseInt(cols[1]);
    row.n_hi = ParseInt(cols[2]);
    row.mass = ParseDouble(cols[3]);
    row.contiguous = cols[4] == "1";
    if (!cols[5].empty()) {
      for (const auto& item : Split(cols[5], ';')) {
        row.accepted.push_back(ParseInt(item));
      }
    }
    belt.rows.push_back(std::move(row));
  }
  auto need = [&](const char* key) -> const std::string& {
    auto it = meta.find(key);
    if (it == meta.end()) {
      throw std::invalid_argument(std::string("ReadBelt: missing header ") + key);
    }
    return it->second;
  };
  const std::string& tag = need("likelihood");
  if (tag == "exact") {
    belt.likelihood = BeltLikelihood::kExact;
  } else if (tag == "marginal") {
    belt.likelihood = BeltLikelihood::kMarginal;
  } else {
    throw std::invalid_argument("ReadBelt: unknown likelihood " + tag);
  }
  belt.model.b = ParseDouble(need("b"));
  belt.model.sigma_b = ParseDouble(need("sigma_b"));
  belt.cl = ParseDouble(need("cl"));
  belt.s_grid.s_min = ParseDouble(need("s_min"));
  belt.s_grid.s_max = ParseDouble(need("s_max"));
  belt.s_grid.step = ParseDouble(need("step"));
  belt.n_max = ParseInt(need("n_max"));
  return belt;
}

}  // namespace onoff

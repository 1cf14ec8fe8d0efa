// SPDX-License-Identifier: Apache-2.0
#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "alphabet.hpp"
#include "editstream.hpp"
#include "errors.hpp"

namespace collabcipher {

std::vector<BenchRow> bench_middleware(const CipherKey& key, BlockPolicy policy,
                                       const std::vector<std::uint64_t>& sizes,
                                       std::uint32_t reps, std::uint64_t seed) {
  if (sizes.empty() || reps == 0) throw DomainError("need sizes and at least one rep");
  SessionOptions opt;
  opt.policy = policy;
  opt.seed = seed;
  CipherSession session(key, opt);

  // Prewarm so lazy permutation derivation does not distort the first sizes.
  {
    EditEvent warm;
    warm.op = "is";
    warm.payload.assign(4096, U'x');
    middleware_outbound(warm, session);
  }

  ChaChaStream rng(stream_key(seed, "bench-payload"));
  std::vector<BenchRow> rows;
  rows.reserve(sizes.size());
  for (std::uint64_t n : sizes) {
    std::vector<double> samples;
    samples.reserve(reps);
    for (std::uint32_t r = 0; r < reps; ++r) {
      EditEvent event;
      event.op = "is";
      event.payload.reserve(n);
      for (std::uint64_t i = 0; i < n; ++i) {
        event.payload.push_back(alphabet::index_to_char(rng.below(alphabet::kAlphabetSize)));
      }
      const auto t0 = std::chrono::steady_clock::now();
      EditEvent out = middleware_outbound(event, session);
      const auto t1 = std::chrono::steady_clock::now();
      if (out.payload.size() != event.payload.size()) {
        throw IntegrityError("middleware changed the payload length");
      }
      samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
    }
    std::sort(samples.begin(), samples.end());
    rows.push_back({n, samples[samples.size() / 2]});
  }
  return rows;
}

LinearFit linear_fit(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) throw DomainError("need at least two points to fit");
  const double n = static_cast<double>(rows.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = static_cast<double>(r.n_chars);
    sx += x;
    sy += r.micros;
    sxx += x * x;
    sxy += x * r.micros;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw DomainError("degenerate x values");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (const auto& r : rows) {
    const double x = static_cast<double>(r.n_chars);
    const double pred = fit.slope * x + fit.intercept;
    ss_res += (r.micros - pred) * (r.micros - pred);
    ss_tot += (r.micros - mean_y) * (r.micros - mean_y);
  }
  fit.r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "n_chars,micros\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%llu,%.3f\n",
                  static_cast<unsigned long long>(r.n_chars), r.micros);
    out += buf;
  }
  return out;
}

}  // namespace collabcipher

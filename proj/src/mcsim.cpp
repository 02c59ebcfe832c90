#include "otwr/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "otwr/order_stats.hpp"
#include "otwr/specfun.hpp"

namespace otwr::mcsim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

TrialRng::Stream::Stream(std::uint64_t seed, std::uint64_t stream_id,
                         std::uint64_t trial_index) {
    std::uint64_t chain = seed;
    (void)splitmix64(chain);
    chain ^= 0x5851f42d4c957f2dULL * stream_id + 0x14057b7ef767814fULL;
    (void)splitmix64(chain);
    chain ^= trial_index;
    for (auto& w : s_) w = splitmix64(chain);
    // xoshiro must not start from the all-zero state
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t TrialRng::Stream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double TrialRng::Stream::uniform() {
    // 53-bit mantissa; offset keeps the value strictly inside (0, 1)
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double TrialRng::Stream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // Marsaglia polar method
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double r2 = u * u + v * v;
        if (r2 >= 1.0 || r2 == 0.0) continue;
        const double f = std::sqrt(-2.0 * std::log(r2) / r2);
        cached_ = v * f;
        has_cached_ = true;
        return u * f;
    }
}

std::pair<double, double> generate_channel_pair(double rho, double sigma,
                                                TrialRng::Stream& rng) {
    const double half = std::sqrt(0.5 * sigma);
    const double gr = half * rng.normal();
    const double gi = half * rng.normal();
    const double vr = half * rng.normal();
    const double vi = half * rng.normal();
    const double decay = std::sqrt(1.0 - rho * rho);
    const double cr = rho * gr + decay * vr;
    const double ci = rho * gi + decay * vi;
    return {gr * gr + gi * gi, cr * cr + ci * ci};
}

int select_max_min(const std::vector<std::pair<double, double>>& outdated_gains) {
    if (outdated_gains.empty()) throw std::invalid_argument("select_max_min: no relays");
    int best = 0;
    double best_min = std::min(outdated_gains[0].first, outdated_gains[0].second);
    for (std::size_t n = 1; n < outdated_gains.size(); ++n) {
        const double m = std::min(outdated_gains[n].first, outdated_gains[n].second);
        if (m > best_min) {
            best_min = m;
            best = static_cast<int>(n);
        }
    }
    return best;
}

double e2e_snr(double gain1, double gain2, const DerivedParams& d) {
    return d.eta1 * d.eta2 * gain1 * gain2 / (d.eta2 * gain2 + d.fixed_gain_const);
}

namespace {

struct TrialGains {
    double outdated1, outdated2, current1, current2;
};

TrialGains run_trial_gains(const SystemConfig& cfg, const DerivedParams& d,
                           TrialRng::Stream& rng) {
    TrialGains best{};
    double best_min = -1.0;
    for (int n = 0; n < cfg.num_relays; ++n) {
        const auto [o1, c1] = generate_channel_pair(cfg.rho1, d.sigma1, rng);
        const auto [o2, c2] = generate_channel_pair(cfg.rho2, d.sigma2, rng);
        const double m = std::min(o1, o2);
        if (m > best_min) {
            best_min = m;
            best = {o1, o2, c1, c2};
        }
    }
    return best;
}

double e2e_snr_of(const TrialGains& g, const DerivedParams& d) {
    return e2e_snr(g.current1, g.current2, d);
}

DerivedParams derive_for_sim(const SystemConfig& cfg) {
    const double s1 = mean_power_hop1(cfg);
    const double s2 = mean_power_hop2(cfg);
    if (cfg.gain_convention == GainConvention::SelectedRelayMeans) {
        const auto table = order_stats::build_coefficient_table(s1, s2, cfg.num_relays);
        return derive(cfg, order_stats::mean_outdated_eq(1, table),
                      order_stats::mean_outdated_eq(2, table));
    }
    return derive(cfg, s1, s2);
}

constexpr std::uint64_t kBlockSize = 8192;

// Runs `trial(stream, trial_index)` for every index in [0, num_trials) over a
// fixed block decomposition. Per-block partial sums are combined in block
// order, so the result is bit-identical for any worker count.
template <typename PerTrial>
McEstimate reduce_mean(const SystemConfig& cfg, std::uint64_t num_trials,
                       std::uint64_t seed, std::uint64_t stream_id, int num_threads,
                       PerTrial&& trial) {
    if (num_trials < 1) throw std::invalid_argument("num_trials must be >= 1");
    cfg.validate();
    const TrialRng rng(seed, stream_id);
    const std::uint64_t num_blocks = (num_trials + kBlockSize - 1) / kBlockSize;
    std::vector<long double> block_sum(num_blocks, 0.0L);
    std::vector<long double> block_sum2(num_blocks, 0.0L);

    std::atomic<std::uint64_t> next_block{0};
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= num_blocks) return;
            const std::uint64_t lo = b * kBlockSize;
            const std::uint64_t hi = std::min(num_trials, lo + kBlockSize);
            long double s = 0.0L, s2 = 0.0L;
            for (std::uint64_t i = lo; i < hi; ++i) {
                auto stream = rng.stream(i);
                const double x = trial(stream);
                s += x;
                s2 += (long double)x * x;
            }
            block_sum[b] = s;
            block_sum2[b] = s2;
        }
    };

    int workers = num_threads > 0 ? num_threads : default_thread_count();
    workers = std::max(1, std::min<int>(workers, 256));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    long double sum = 0.0L, sum2 = 0.0L;
    for (std::uint64_t b = 0; b < num_blocks; ++b) {
        sum += block_sum[b];
        sum2 += block_sum2[b];
    }
    const long double n = (long double)num_trials;
    const long double mean = sum / n;
    long double var = 0.0L;
    if (num_trials > 1) var = std::max(0.0L, (sum2 - n * mean * mean) / (n - 1.0L));
    McEstimate e;
    e.value = static_cast<double>(mean);
    e.std_error = static_cast<double>(std::sqrt((double)(var / n)));
    e.num_trials = num_trials;
    e.seed = seed;
    return e;
}

}  // namespace

double run_trial(const SystemConfig& cfg, const DerivedParams& derived,
                 TrialRng::Stream& rng) {
    return e2e_snr_of(run_trial_gains(cfg, derived, rng), derived);
}

int default_thread_count() {
    if (const char* env = std::getenv("OTWR_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

McEstimate estimate_outage(const SystemConfig& cfg, double psi, std::uint64_t num_trials,
                           std::uint64_t seed, std::uint64_t stream_id, int num_threads) {
    if (!(psi >= 0.0)) throw std::invalid_argument("estimate_outage: requires Psi >= 0");
    const DerivedParams d = derive_for_sim(cfg);
    return reduce_mean(cfg, num_trials, seed, stream_id, num_threads,
                       [&](TrialRng::Stream& s) {
                           return run_trial(cfg, d, s) < psi ? 1.0 : 0.0;
                       });
}

McEstimate estimate_ser(const SystemConfig& cfg, const e2e::ModulationSpec& mod,
                        std::uint64_t num_trials, std::uint64_t seed,
                        std::uint64_t stream_id, int num_threads) {
    mod.validate();
    const DerivedParams d = derive_for_sim(cfg);
    const bool coherent = (mod.kind == e2e::ModulationKind::Coherent);
    return reduce_mean(cfg, num_trials, seed, stream_id, num_threads,
                       [&](TrialRng::Stream& s) {
                           const double snr = run_trial(cfg, d, s);
                           return coherent
                                      ? mod.a * specfun::q_function(std::sqrt(mod.b * snr))
                                      : mod.a * std::exp(-mod.b * snr);
                       });
}

McEstimate estimate_ser_bpsk_symbol(const SystemConfig& cfg, std::uint64_t num_trials,
                                    std::uint64_t seed, std::uint64_t stream_id,
                                    int num_threads) {
    const DerivedParams d = derive_for_sim(cfg);
    return reduce_mean(cfg, num_trials, seed, stream_id, num_threads,
                       [&](TrialRng::Stream& s) {
                           const double snr = run_trial(cfg, d, s);
                           // BPSK decision error iff the per-symbol noise
                           // exceeds the signal amplitude sqrt(2 snr)
                           return s.normal() > std::sqrt(2.0 * snr) ? 1.0 : 0.0;
                       });
}

McEstimate estimate_mgf(const SystemConfig& cfg, double s, std::uint64_t num_trials,
                        std::uint64_t seed, std::uint64_t stream_id, int num_threads) {
    if (!(s > 0.0)) throw std::invalid_argument("estimate_mgf: requires s > 0");
    const DerivedParams d = derive_for_sim(cfg);
    return reduce_mean(cfg, num_trials, seed, stream_id, num_threads,
                       [&](TrialRng::Stream& st) {
                           return std::exp(-s * run_trial(cfg, d, st));
                       });
}

EqGainStats estimate_eq_gain_stats(const SystemConfig& cfg, std::vector<double> abscissae,
                                   std::uint64_t num_trials, std::uint64_t seed,
                                   std::uint64_t stream_id, int num_threads) {
    if (num_trials < 1) throw std::invalid_argument("num_trials must be >= 1");
    cfg.validate();
    const DerivedParams d = derive_for_sim(cfg);
    const std::size_t nx = abscissae.size();
    const TrialRng rng(seed, stream_id);
    const std::uint64_t num_blocks = (num_trials + kBlockSize - 1) / kBlockSize;

    // Per block: 4 sums, 4 sums of squares, 4*nx indicator counts.
    struct BlockAcc {
        long double sum[4] = {0, 0, 0, 0};
        long double sum2[4] = {0, 0, 0, 0};
        std::vector<std::uint64_t> counts;
    };
    std::vector<BlockAcc> blocks(num_blocks);

    std::atomic<std::uint64_t> next_block{0};
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= num_blocks) return;
            BlockAcc acc;
            acc.counts.assign(4 * nx, 0);
            const std::uint64_t lo = b * kBlockSize;
            const std::uint64_t hi = std::min(num_trials, lo + kBlockSize);
            for (std::uint64_t i = lo; i < hi; ++i) {
                auto stream = rng.stream(i);
                const TrialGains g = run_trial_gains(cfg, d, stream);
                const double vals[4] = {g.outdated1, g.outdated2, g.current1, g.current2};
                for (int k = 0; k < 4; ++k) {
                    acc.sum[k] += vals[k];
                    acc.sum2[k] += (long double)vals[k] * vals[k];
                    for (std::size_t j = 0; j < nx; ++j)
                        if (vals[k] < abscissae[j]) ++acc.counts[k * nx + j];
                }
            }
            blocks[b] = std::move(acc);
        }
    };

    int workers = num_threads > 0 ? num_threads : default_thread_count();
    workers = std::max(1, std::min<int>(workers, 256));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    long double sum[4] = {0, 0, 0, 0}, sum2[4] = {0, 0, 0, 0};
    std::vector<std::uint64_t> counts(4 * nx, 0);
    for (const auto& b : blocks) {
        for (int k = 0; k < 4; ++k) {
            sum[k] += b.sum[k];
            sum2[k] += b.sum2[k];
        }
        for (std::size_t j = 0; j < 4 * nx; ++j) counts[j] += b.counts[j];
    }

    const long double n = (long double)num_trials;
    auto mean_estimate = [&](int k) {
        const long double mean = sum[k] / n;
        long double var = 0.0L;
        if (num_trials > 1) var = std::max(0.0L, (sum2[k] - n * mean * mean) / (n - 1.0L));
        return McEstimate{(double)mean, std::sqrt((double)(var / n)), num_trials, seed};
    };
    auto cdf_estimate = [&](int k, std::size_t j) {
        const double p = (double)((long double)counts[k * nx + j] / n);
        return McEstimate{p, std::sqrt(std::max(0.0, p * (1.0 - p)) / (double)num_trials),
                          num_trials, seed};
    };

    EqGainStats out;
    out.abscissae = std::move(abscissae);
    out.mean_outdated1 = mean_estimate(0);
    out.mean_outdated2 = mean_estimate(1);
    out.mean_current1 = mean_estimate(2);
    out.mean_current2 = mean_estimate(3);
    for (std::size_t j = 0; j < nx; ++j) {
        out.cdf_outdated1.push_back(cdf_estimate(0, j));
        out.cdf_outdated2.push_back(cdf_estimate(1, j));
        out.cdf_current1.push_back(cdf_estimate(2, j));
        out.cdf_current2.push_back(cdf_estimate(3, j));
    }
    return out;
}

}  // namespace otwr::mcsim

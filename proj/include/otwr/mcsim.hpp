#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "otwr/config.hpp"
#include "otwr/e2e.hpp"

namespace otwr::mcsim {

/// Counter-keyed random stream: the generator state for trial n is a pure
/// function of (seed, stream_id, n), so chunked or threaded execution cannot
/// change any drawn value. Gaussians use the Marsaglia polar method.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Per-trial generator (xoshiro256++ seeded via a splitmix64 chain).
    class Stream {
    public:
        Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t trial_index);
        double uniform();           // (0, 1)
        double normal();            // standard normal
    private:
        std::uint64_t next_u64();
        std::uint64_t s_[4];
        double cached_ = 0.0;
        bool has_cached_ = false;
    };

    Stream stream(std::uint64_t trial_index) const { return {seed_, stream_id_, trial_index}; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

/// Monte-Carlo point estimate.
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;  // sample std / sqrt(N)
    std::uint64_t num_trials = 0;
    std::uint64_t seed = 0;
};

/// Draws one correlated (outdated, current) channel power gain pair:
/// outdated |g|^2 with E = sigma, current from the Gauss-Markov update.
std::pair<double, double> generate_channel_pair(double rho, double sigma,
                                                TrialRng::Stream& rng);

/// Max-min selection: index of the pair whose smaller outdated gain is
/// largest. Ties resolve to the lowest index.
int select_max_min(const std::vector<std::pair<double, double>>& outdated_gains);

/// Fixed-gain end-to-end SNR of the selected relay's current gains.
double e2e_snr(double gain1, double gain2, const DerivedParams& derived);

/// One end-to-end trial: R pair draws per hop, max-min selection on the
/// outdated gains, fixed-gain E2E SNR of the selected relay.
double run_trial(const SystemConfig& cfg, const DerivedParams& derived,
                 TrialRng::Stream& rng);

/// Default worker count: the OTWR_THREADS environment variable if set,
/// otherwise the hardware concurrency. Results never depend on it.
int default_thread_count();

McEstimate estimate_outage(const SystemConfig& cfg, double psi, std::uint64_t num_trials,
                           std::uint64_t seed, std::uint64_t stream_id = 0,
                           int num_threads = 0);

/// Semi-analytic SER: averages the conditional error rate a Q(sqrt(b Y)) or
/// a e^{-b Y} over simulated SNR samples.
McEstimate estimate_ser(const SystemConfig& cfg, const e2e::ModulationSpec& mod,
                        std::uint64_t num_trials, std::uint64_t seed,
                        std::uint64_t stream_id = 0, int num_threads = 0);

/// Symbol-level BPSK detector (noise drawn per symbol); slow cross-check
/// for the semi-analytic path.
McEstimate estimate_ser_bpsk_symbol(const SystemConfig& cfg, std::uint64_t num_trials,
                                    std::uint64_t seed, std::uint64_t stream_id = 0,
                                    int num_threads = 0);

/// Average of e^{-s Y}.
McEstimate estimate_mgf(const SystemConfig& cfg, double s, std::uint64_t num_trials,
                        std::uint64_t seed, std::uint64_t stream_id = 0,
                        int num_threads = 0);

/// Empirical means and CDF samples of the selected relay's four equivalent
/// gains (outdated and current, both hops).
struct EqGainStats {
    McEstimate mean_outdated1, mean_outdated2, mean_current1, mean_current2;
    std::vector<double> abscissae;
    std::vector<McEstimate> cdf_outdated1, cdf_outdated2, cdf_current1, cdf_current2;
};
EqGainStats estimate_eq_gain_stats(const SystemConfig& cfg, std::vector<double> abscissae,
                                   std::uint64_t num_trials, std::uint64_t seed,
                                   std::uint64_t stream_id = 0, int num_threads = 0);

}  // namespace otwr::mcsim

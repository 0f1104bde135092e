#include "qrb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <thread>

#include "qrb/errors.hpp"

namespace qrb::analysis {

namespace {

constexpr double kProbabilitySumTolerance = 1e-12;
constexpr double kTermCutoffRatio = 1e-30;

bool is_probability(double p) {
    return p >= 0.0 && p <= 1.0;
}

void require_point(const AnalysisParams& params, int threshold, int trustee_count) {
    params.validate();
    if (threshold < 1 || threshold > trustee_count ||
        trustee_count > params.model.contacts_total) {
        throw ParamError("require 1 <= k <= n <= N");
    }
}

/// Compensated (Kahan) accumulator; the scenario sums mix magnitudes
/// spanning many orders.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// splitmix64; used to derive independent per-worker seeds.
uint64_t mix_seed(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double uniform01(std::uint64_t raw) {
    return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

// Uniform draw in [0, bound) via the widening-multiply trick.
uint64_t bounded(uint64_t raw, uint64_t bound) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(raw) * bound) >> 64);
}

uint64_t run_attack_walks(const AnalysisParams& params, int threshold, int trustee_count,
                          uint64_t trials, uint64_t seed) {
    // mt19937_64 output is fully specified by the standard, so fixed seeds
    // give the same estimates on every platform.
    std::mt19937_64 engine(seed);
    const double p1 = params.model.contact_ignores;
    const double q3 = params.model.trustee_fooled;
    const double q3_plus_q1 = q3 + params.model.trustee_ignores;
    const int contacts_total = params.model.contacts_total;

    uint64_t successes = 0;
    for (uint64_t trial = 0; trial < trials; ++trial) {
        int remaining_people = contacts_total;
        int remaining_trustees = trustee_count;
        int fooled = 0;
        while (remaining_people > 0) {
            // The next person in the random walk is a trustee with
            // probability remaining_trustees / remaining_people.
            const bool is_trustee =
                bounded(engine(), static_cast<uint64_t>(remaining_people)) <
                static_cast<uint64_t>(remaining_trustees);
            --remaining_people;
            const double reaction = uniform01(engine());
            if (is_trustee) {
                --remaining_trustees;
                if (reaction < q3) {
                    if (++fooled == threshold) {
                        ++successes;
                        break;
                    }
                } else if (reaction >= q3_plus_q1) {
                    break;  // trustee notified the owner
                }
            } else if (reaction >= p1) {
                break;  // regular contact notified the owner
            }
        }
    }
    return successes;
}

void append_report_row(std::string& out, const FailureReport& report) {
    char line[160];
    std::snprintf(line, sizeof line, "%d,%d,%.12e,%.12e,%.12e\n", report.trustee_count,
                  report.threshold, report.attack_success, report.recovery_failure,
                  report.failure_rate);
    out += line;
}

}  // namespace

void AdversaryModel::validate() const {
    if (contacts_total < 1) {
        throw ParamError("adversary model: need at least one contact");
    }
    for (double p : {steal_probability, contact_ignores, contact_notifies, trustee_ignores,
                     trustee_notifies, trustee_fooled}) {
        if (!is_probability(p)) {
            throw ParamError("adversary model: probabilities must lie in [0,1]");
        }
    }
    if (std::abs(contact_ignores + contact_notifies - 1.0) > kProbabilitySumTolerance) {
        throw ParamError("adversary model: contact reactions must sum to 1");
    }
    if (std::abs(trustee_ignores + trustee_notifies + trustee_fooled - 1.0) >
        kProbabilitySumTolerance) {
        throw ParamError("adversary model: trustee reactions must sum to 1");
    }
}

void AnalysisParams::validate() const {
    model.validate();
    if (!is_probability(trustee_unavailable)) {
        throw ParamError("trustee unavailability must lie in [0,1]");
    }
}

AnalysisParams default_parameters() {
    AnalysisParams params;
    params.model.contacts_total = 404;       // average friend-list size
    params.model.steal_probability = 0.00274;  // burglary rate, worst case
    params.model.trustee_fooled = 0.45;        // observed social-engineering rate
    params.model.trustee_ignores = 0.275;      // (1 - 0.45) / 2
    params.model.trustee_notifies = 0.275;
    params.model.contact_ignores = 0.45;       // assumed equal to the fooled rate
    params.model.contact_notifies = 0.55;
    params.trustee_unavailable = 0.001;
    params.validate();
    return params;
}

double binomial(int n, int r) {
    if (r < 0 || n < 0 || r > n) {
        return 0.0;
    }
    r = std::min(r, n - r);
    double result = 1.0;
    for (int i = 1; i <= r; ++i) {
        result = result * static_cast<double>(n - r + i) / static_cast<double>(i);
    }
    return result;
}

double log_binomial(int n, int r) {
    if (r < 0 || n < 0 || r > n) {
        throw ParamError("log_binomial: out of range");
    }
    return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

double scenario_success_probability(const AnalysisParams& params, int threshold,
                                    int trustee_count, int trustees_contacted,
                                    int contacts_ignored) {
    require_point(params, threshold, trustee_count);
    const int contacts_total = params.model.contacts_total;
    if (trustees_contacted < threshold || trustees_contacted > trustee_count) {
        throw ParamError("scenario: trustees contacted must lie in [k, n]");
    }
    if (contacts_ignored < 0 || contacts_ignored > contacts_total - trustee_count) {
        throw ParamError("scenario: ignored contacts must lie in [0, N - n]");
    }

    const int i = trustees_contacted;
    const int j = contacts_ignored;
    const double arrangements =
        binomial(i - 1 + j, j) * binomial(contacts_total - i - j, trustee_count - i) /
        binomial(contacts_total, trustee_count);
    const double reactions = std::pow(params.model.contact_ignores, j) *
                             binomial(i - 1, i - threshold) *
                             std::pow(params.model.trustee_fooled, threshold) *
                             std::pow(params.model.trustee_ignores, i - threshold);
    return arrangements * reactions;
}

double attack_success_exact(const AnalysisParams& params, int threshold, int trustee_count) {
    require_point(params, threshold, trustee_count);
    const int contacts_total = params.model.contacts_total;
    const double p1 = params.model.contact_ignores;
    const double q1 = params.model.trustee_ignores;
    const double q3 = params.model.trustee_fooled;
    const int max_ignored = contacts_total - trustee_count;

    KahanSum total;

    // walk_weight(i) = C(i-1, i-k) q3^k q1^(i-k): the reaction pattern of
    // the i contacted trustees. Updated by ratio as i grows.
    double walk_weight = std::pow(q3, threshold);
    for (int i = threshold; i <= trustee_count; ++i) {
        if (i > threshold) {
            walk_weight *= q1 * static_cast<double>(i - 1) / static_cast<double>(i - threshold);
        }
        if (walk_weight == 0.0) {
            break;  // q1 = 0 zeroes every later i as well
        }

        // arrangement(i, j) = C(i-1+j, j) C(N-i-j, n-i) p1^j / C(N, n),
        // advanced in j by ratio. Term magnitudes decay geometrically once
        // j passes its mode, so the 1e-30 cutoff loses nothing.
        double arrangement = binomial(contacts_total - i, trustee_count - i) /
                             binomial(contacts_total, trustee_count);
        for (int j = 0; j <= max_ignored; ++j) {
            if (j > 0) {
                arrangement *= p1 * (static_cast<double>(i - 1 + j) / static_cast<double>(j)) *
                               (static_cast<double>(max_ignored - j + 1) /
                                static_cast<double>(contacts_total - i - j + 1));
            }
            const double term = walk_weight * arrangement;
            if (term <= total.sum * kTermCutoffRatio) {
                break;
            }
            total.add(term);
        }
    }
    return params.model.steal_probability * total.sum;
}

double attack_success_approx(const AnalysisParams& params, int threshold, int trustee_count) {
    require_point(params, threshold, trustee_count);
    const double per_try = static_cast<double>(trustee_count) /
                           static_cast<double>(params.model.contacts_total) *
                           params.model.trustee_fooled;
    return params.model.steal_probability * std::pow(per_try, threshold);
}

double recovery_unreliability(double unavailable_rate, int threshold, int trustee_count) {
    if (!is_probability(unavailable_rate)) {
        throw ParamError("unavailability must lie in [0,1]");
    }
    if (threshold < 1 || threshold > trustee_count) {
        throw ParamError("require 1 <= k <= n");
    }
    // Recovery fails when more than n-k trustees are unavailable. Summed
    // from the smallest term (all n unavailable) upward.
    KahanSum tail;
    for (int unavailable = trustee_count; unavailable >= trustee_count - threshold + 1;
         --unavailable) {
        tail.add(binomial(trustee_count, unavailable) *
                 std::pow(1.0 - unavailable_rate, trustee_count - unavailable) *
                 std::pow(unavailable_rate, unavailable));
    }
    return tail.sum;
}

double combined_failure(double attack_success, double recovery_failure, bool approximate) {
    if (!is_probability(attack_success) || !is_probability(recovery_failure)) {
        throw ParamError("failure components must lie in [0,1]");
    }
    if (approximate) {
        return attack_success + recovery_failure;
    }
    return attack_success + recovery_failure - attack_success * recovery_failure;
}

SimulationResult simulate_attack(const AnalysisParams& params, int threshold, int trustee_count,
                                 uint64_t trials, uint64_t seed, int workers) {
    require_point(params, threshold, trustee_count);
    if (trials < 1) {
        throw ParamError("simulate_attack: need at least one trial");
    }
    if (workers < 1) {
        throw ParamError("simulate_attack: need at least one worker");
    }

    uint64_t successes = 0;
    if (workers == 1) {
        successes = run_attack_walks(params, threshold, trustee_count, trials, mix_seed(seed));
    } else {
        std::vector<uint64_t> partial(static_cast<size_t>(workers), 0);
        std::vector<std::thread> pool;
        const uint64_t base = trials / static_cast<uint64_t>(workers);
        const uint64_t leftover = trials % static_cast<uint64_t>(workers);
        for (int w = 0; w < workers; ++w) {
            const uint64_t share = base + (static_cast<uint64_t>(w) < leftover ? 1 : 0);
            const uint64_t worker_seed = mix_seed(seed ^ mix_seed(static_cast<uint64_t>(w) + 1));
            pool.emplace_back([&, w, share, worker_seed] {
                partial[static_cast<size_t>(w)] =
                    run_attack_walks(params, threshold, trustee_count, share, worker_seed);
            });
        }
        for (std::thread& t : pool) t.join();
        for (uint64_t s : partial) successes += s;
    }

    const double p_hat = static_cast<double>(successes) / static_cast<double>(trials);
    const double steal = params.model.steal_probability;
    SimulationResult result;
    result.successes = successes;
    result.trials = trials;
    result.estimate = steal * p_hat;
    result.std_error = steal * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
    return result;
}

ThresholdScan optimal_threshold(const AnalysisParams& params, int trustee_count) {
    params.validate();
    if (trustee_count < 1 || trustee_count > params.model.contacts_total) {
        throw ParamError("optimal_threshold: require 1 <= n <= N");
    }

    ThresholdScan scan;
    scan.trustee_count = trustee_count;
    scan.curve.reserve(static_cast<size_t>(trustee_count));
    for (int k = 1; k <= trustee_count; ++k) {
        FailureReport report;
        report.trustee_count = trustee_count;
        report.threshold = k;
        report.attack_success = attack_success_exact(params, k, trustee_count);
        report.recovery_failure =
            recovery_unreliability(params.trustee_unavailable, k, trustee_count);
        report.failure_rate =
            combined_failure(report.attack_success, report.recovery_failure, false);
        scan.curve.push_back(report);
    }

    scan.best_threshold = 1;
    scan.min_failure_rate = scan.curve.front().failure_rate;
    for (const FailureReport& report : scan.curve) {
        if (report.failure_rate < scan.min_failure_rate) {
            scan.min_failure_rate = report.failure_rate;
            scan.best_threshold = report.threshold;
        }
    }
    return scan;
}

std::string_view to_string(ComparisonApproach approach) {
    switch (approach) {
        case ComparisonApproach::local_storage: return "local_storage";
        case ComparisonApproach::password: return "password";
        case ComparisonApproach::biometric: return "biometric";
        case ComparisonApproach::direct_escrow: return "direct_escrow";
        case ComparisonApproach::indirect_permission: return "indirect_permission";
    }
    return "unknown";
}

std::vector<ComparisonRow> comparison_table(const AnalysisParams& params, int threshold,
                                            int trustee_count) {
    require_point(params, threshold, trustee_count);

    // Published real-world rates for the non-social approaches.
    constexpr double kPasswordGuessRate = 0.40;        // guessable within 16 days
    constexpr double kPasswordForgetRate = 0.0428;     // forgotten within 3 months
    constexpr double kFingerprintSpoofRate = 0.05;
    constexpr double kFingerprintFalseReject = 0.05;

    const double steal = params.model.steal_probability;
    const double unavailability_tail =
        recovery_unreliability(params.trustee_unavailable, threshold, trustee_count);

    // Trustees in a direct escrow already hold the shares, so the adversary
    // skips the steal and works the trustee set directly: the contact pool
    // shrinks to exactly the trustees. Share passwords still need guessing.
    AnalysisParams escrow = params;
    escrow.model.contacts_total = trustee_count;
    escrow.model.steal_probability = 1.0;
    const double escrow_attack =
        kPasswordGuessRate * attack_success_exact(escrow, threshold, trustee_count);

    const auto row = [](ComparisonApproach approach, int n, int k, double attack,
                        double loss) {
        ComparisonRow r;
        r.approach = approach;
        r.report.trustee_count = n;
        r.report.threshold = k;
        r.report.attack_success = attack;
        r.report.recovery_failure = loss;
        r.report.failure_rate = combined_failure(attack, loss, true);
        return r;
    };

    return {
        // An offline copy fails outright when stolen; assume it is lost or
        // destroyed at the same rate it is stolen.
        row(ComparisonApproach::local_storage, 0, 0, steal, steal),
        row(ComparisonApproach::password, 0, 0, kPasswordGuessRate * steal,
            kPasswordForgetRate),
        row(ComparisonApproach::biometric, 0, 0, kFingerprintSpoofRate * steal,
            kFingerprintFalseReject),
        row(ComparisonApproach::direct_escrow, trustee_count, threshold, escrow_attack,
            unavailability_tail),
        row(ComparisonApproach::indirect_permission, trustee_count, threshold,
            attack_success_exact(params, threshold, trustee_count), unavailability_tail),
    };
}

void write_curve_csv(std::ostream& out, const ThresholdScan& scan) {
    std::string text = "n,k,P,Q,F\n";
    for (const FailureReport& report : scan.curve) {
        append_report_row(text, report);
    }
    out << text;
}

void write_optima_csv(std::ostream& out, std::span<const ThresholdScan> scans) {
    std::string text = "n,k_opt,F_min\n";
    for (const ThresholdScan& scan : scans) {
        char line[96];
        std::snprintf(line, sizeof line, "%d,%d,%.12e\n", scan.trustee_count,
                      scan.best_threshold, scan.min_failure_rate);
        text += line;
    }
    out << text;
}

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows) {
    std::string text = "approach,P,Q,F\n";
    for (const ComparisonRow& row : rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%s,%.12e,%.12e,%.12e\n",
                      std::string(to_string(row.approach)).c_str(), row.report.attack_success,
                      row.report.recovery_failure, row.report.failure_rate);
        text += line;
    }
    out << text;
}

}  // namespace qrb::analysis

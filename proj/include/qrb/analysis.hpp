#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace qrb::analysis {

/// Probabilities describing how an adversary's decryption requests play
/// out. When a regular contact is asked, they ignore the request or notify
/// the owner; a trustee can also be fooled into decrypting.
struct AdversaryModel {
    int contacts_total = 0;         // N: size of the owner's contact list
    double steal_probability = 0;   // chance the adversary obtains the backup files
    double contact_ignores = 0;     // p1
    double contact_notifies = 0;    // p2 = 1 - p1
    double trustee_ignores = 0;     // q1
    double trustee_notifies = 0;    // q2
    double trustee_fooled = 0;      // q3, with q1 + q2 + q3 = 1

    /// Throws ParamError unless all probabilities lie in [0,1],
    /// p1 + p2 = 1 and q1 + q2 + q3 = 1 (each within 1e-12), and N >= 1.
    void validate() const;
};

struct AnalysisParams {
    AdversaryModel model;
    double trustee_unavailable = 0;  // U: a trustee cannot or will not help

    void validate() const;
};

/// One evaluated (k,n) point: P = attack success, Q = recovery failure,
/// F = combined failure rate.
struct FailureReport {
    int trustee_count = 0;  // n
    int threshold = 0;      // k
    double attack_success = 0;    // P
    double recovery_failure = 0;  // Q
    double failure_rate = 0;      // F
};

/// Reference parameter set assembled from published statistics: 404
/// contacts, 0.274% burglary rate, 45% of trustees foolable with the
/// remainder split evenly between ignoring and notifying, contacts ignoring
/// at the same 45% rate, and 0.1% unavailable trustees.
AnalysisParams default_parameters();

/// Binomial coefficient as a double, computed multiplicatively.
double binomial(int n, int r);
/// log C(n, r) via lgamma; cross-validates the multiplicative route.
double log_binomial(int n, int r);

/// Probability that the adversary's walk through the contact list fools its
/// k-th trustee as the `trustees_contacted`-th trustee overall after
/// exactly `contacts_ignored` regular contacts, nobody having notified the
/// owner. Does not include the steal probability.
double scenario_success_probability(const AnalysisParams& params, int threshold,
                                    int trustee_count, int trustees_contacted,
                                    int contacts_ignored);

/// Worst-case attack success rate: steal the backup, then gather k share
/// decryptions without triggering a notification. Exact double sum over all
/// stopping scenarios.
double attack_success_exact(const AnalysisParams& params, int threshold, int trustee_count);

/// Closed-form approximation steal * (n/N * q3)^k, good when N >> n.
double attack_success_approx(const AnalysisParams& params, int threshold, int trustee_count);

/// Probability that more than n-k trustees are unavailable at recovery
/// time: the upper binomial tail in U.
double recovery_unreliability(double unavailable_rate, int threshold, int trustee_count);

/// F = P + Q - PQ exactly, or P + Q when `approximate` (valid for P,Q << 1).
double combined_failure(double attack_success, double recovery_failure, bool approximate);

struct SimulationResult {
    double estimate = 0;   // steal-scaled success probability
    double std_error = 0;  // one-sigma binomial error, steal-scaled
    uint64_t successes = 0;
    uint64_t trials = 0;
};

/// Monte Carlo oracle for attack_success_exact. Each trial places the
/// trustees uniformly in the contact list and walks a random permutation:
/// contacts ignore or notify, trustees ignore, notify or get fooled; the
/// walk succeeds when the k-th trustee is fooled and dies on the first
/// notification or when contacts run out. Deterministic for a fixed
/// (seed, trials, workers) triple.
SimulationResult simulate_attack(const AnalysisParams& params, int threshold, int trustee_count,
                                 uint64_t trials, uint64_t seed, int workers = 1);

struct ThresholdScan {
    int trustee_count = 0;
    int best_threshold = 0;
    double min_failure_rate = 0;
    std::vector<FailureReport> curve;  // one report per k = 1..n
};

/// Evaluates F(k) for k = 1..n and returns the minimum (ties go to the
/// smaller, more reliable k).
ThresholdScan optimal_threshold(const AnalysisParams& params, int trustee_count);

enum class ComparisonApproach {
    local_storage,
    password,
    biometric,
    direct_escrow,
    indirect_permission,
};

std::string_view to_string(ComparisonApproach approach);

struct ComparisonRow {
    ComparisonApproach approach;
    FailureReport report;
};

/// Failure-rate comparison of five backup approaches at one (k,n) point,
/// using the P + Q combination throughout. The non-social rows use
/// published rates: 40% of passwords guessable, 4.28% forgotten;
/// fingerprints spoofable and falsely rejected at 5% each; offline copies
/// assumed lost at the same rate they are stolen.
std::vector<ComparisonRow> comparison_table(const AnalysisParams& params, int threshold = 3,
                                            int trustee_count = 5);

// CSV emitters. Headers are part of the tool's contract:
//   curve:       n,k,P,Q,F
//   optima:      n,k_opt,F_min
//   comparison:  approach,P,Q,F
void write_curve_csv(std::ostream& out, const ThresholdScan& scan);
void write_optima_csv(std::ostream& out, std::span<const ThresholdScan> scans);
void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows);

}  // namespace qrb::analysis

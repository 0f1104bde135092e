// Acceptance suite: one check per release criterion, each printed as a
// single [PASS]/[FAIL] line. Exits nonzero if any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qrb/analysis.hpp"
#include "qrb/armor.hpp"
#include "qrb/bundle.hpp"
#include "qrb/crypto.hpp"
#include "qrb/directory.hpp"
#include "qrb/entropy.hpp"
#include "qrb/errors.hpp"
#include "qrb/protocol.hpp"
#include "qrb/sss.hpp"

using namespace qrb;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kGoldenDir = QRB_TEST_DATA_DIR;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Ceremony {
    crypto::KeyPair owner;
    std::vector<crypto::KeyPair> trustee_keys;
    std::vector<protocol::TrusteeDescriptor> trustees;
    Bytes secret;
    InMemoryDirectory directory;
    BackupBundle bundle;
};

Ceremony make_ceremony(uint64_t seed, int k, int n, size_t secret_len = 48) {
    SeededEntropy rng(seed);
    Ceremony c;
    c.owner = crypto::generate_identity_keypair(rng);
    for (int i = 0; i < n; ++i) {
        c.trustee_keys.push_back(crypto::generate_identity_keypair(rng));
        c.trustees.push_back({"trustee-" + std::to_string(i), c.trustee_keys.back().public_key()});
    }
    c.secret = rng.next(secret_len);

    RecoveryInstruction instruction;
    instruction.owner_display_name = "Alice Example";
    instruction.owner_key_fingerprint = crypto::fingerprint(c.owner.public_key());
    instruction.directory_locator = "alice";
    c.directory.add("alice", c.owner.public_key());

    c.bundle = protocol::create_backup(c.owner, c.secret, c.trustees, k, instruction,
                                       BackupMode::indirect_permission, rng);
    return c;
}

Bytes slurp(const std::string& name) {
    std::ifstream in(kGoldenDir + "/" + name, std::ios::binary);
    if (!in) throw Error("missing golden fixture " + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string s = buf.str();
    return Bytes(s.begin(), s.end());
}

// ---------------------------------------------------------------- 1

void criterion_1_protocol_round_trip() {
    const auto start = Clock::now();
    bool pass = true;
    std::string detail;

    for (int n = 1; n <= 6 && pass; ++n) {
        for (int k = 1; k <= n && pass; ++k) {
            const Ceremony c =
                make_ceremony(9000 + static_cast<uint64_t>(10 * n + k), k, n);

            std::vector<protocol::ShareResponse> responses;
            for (const auto& key : c.trustee_keys) {
                const auto decision = protocol::respond_to_recovery_request(
                    key, c.bundle.sealed_packets, c.directory,
                    protocol::Verdict::confirmed_owner);
                if (!std::holds_alternative<protocol::ShareResponse>(decision)) {
                    pass = false;
                    detail = "trustee refused a legitimate request";
                    break;
                }
                responses.push_back(std::get<protocol::ShareResponse>(decision));
            }
            if (!pass) break;

            for (uint32_t mask = 0; mask < (1u << n) && pass; ++mask) {
                const int bits = __builtin_popcount(mask);
                if (bits != k && bits != k - 1) continue;
                protocol::RecoverySession session(c.bundle);
                for (int i = 0; i < n; ++i) {
                    if (mask & (1u << i)) session.absorb(responses[static_cast<size_t>(i)]);
                }
                if (bits == k) {
                    if (session.state() != protocol::RecoverySession::State::ready ||
                        session.finish() != c.secret) {
                        pass = false;
                        detail = "k-subset recovery mismatch at (k=" + std::to_string(k) +
                                 ", n=" + std::to_string(n) + ")";
                    }
                } else if (session.state() == protocol::RecoverySession::State::ready) {
                    pass = false;
                    detail = "session ready with k-1 shares at (k=" + std::to_string(k) +
                             ", n=" + std::to_string(n) + ")";
                }
            }
        }
    }

    const double elapsed = seconds_since(start);
    if (pass && elapsed >= 10.0) {
        pass = false;
        detail = "exceeded 10 s budget";
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s", elapsed);
    report(1, pass,
           "backup+recovery bit-exact for every k-subset, never ready with k-1, all (k,n) up to n=6",
           detail.empty() ? timing : detail);
}

// ---------------------------------------------------------------- 2

void criterion_2_hiding_witness() {
    const auto start = Clock::now();
    SeededEntropy rng(9100);
    bool pass = true;
    std::string detail;

    const Bytes secret = {0xC3};
    const auto shares = sss::split(secret, 2, 2, rng);
    std::array<int, 256> coverage{};
    for (int v = 0; v < 256 && pass; ++v) {
        const sss::Share hypothetical{2, Bytes{static_cast<uint8_t>(v)}};
        const Bytes reconstructed =
            sss::combine(std::vector<sss::Share>{shares[0], hypothetical}, 2);
        if (reconstructed.size() != 1) {
            pass = false;
            detail = "reconstruction size mismatch";
            break;
        }
        coverage[reconstructed[0]] += 1;
    }
    for (int count : coverage) {
        if (count != 1) {
            pass = false;
            detail = "candidate sweep does not cover every secret exactly once";
            break;
        }
    }
    const double elapsed = seconds_since(start);
    if (pass && elapsed >= 1.0) {
        pass = false;
        detail = "exceeded 1 s budget";
    }
    report(2, pass, "one share of a (2,n) split is consistent with all 256 one-octet secrets",
           detail);
}

// ---------------------------------------------------------------- 3

void criterion_3_oracle_grid() {
    const auto start = Clock::now();
    bool pass = true;
    std::string detail;
    double worst_z = 0.0;

    analysis::AnalysisParams params;
    params.model.steal_probability = 1.0;
    params.model.contact_ignores = 0.5;
    params.model.contact_notifies = 0.5;
    params.model.trustee_fooled = 0.5;
    params.model.trustee_ignores = 0.25;
    params.model.trustee_notifies = 0.25;
    params.trustee_unavailable = 0.0;

    for (int contacts : {5, 10, 20}) {
        params.model.contacts_total = contacts;
        for (int n = 2; n <= std::min(5, contacts); ++n) {
            for (int k = 1; k <= n; ++k) {
                const double exact = analysis::attack_success_exact(params, k, n);
                const uint64_t seed = 20260809ull + static_cast<uint64_t>(
                                                        contacts * 10000 + n * 100 + k);
                const auto sim = analysis::simulate_attack(params, k, n, 1000000, seed);
                const double sigma = sim.std_error;
                const double z = sigma > 0.0 ? std::abs(sim.estimate - exact) / sigma
                                             : (sim.estimate == exact ? 0.0 : 1e9);
                worst_z = std::max(worst_z, z);
                if (z > 3.0) {
                    pass = false;
                    char buf[128];
                    std::snprintf(buf, sizeof buf, "N=%d n=%d k=%d z=%.2f (exact %.4e, mc %.4e)",
                                  contacts, n, k, z, exact, sim.estimate);
                    detail = buf;
                }
            }
        }
    }

    const double elapsed = seconds_since(start);
    if (pass && elapsed >= 120.0) {
        pass = false;
        detail = "exceeded 2 min budget";
    }
    if (detail.empty()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "max |z| = %.2f, %.1f s", worst_z, elapsed);
        detail = buf;
    }
    report(3, pass,
           "closed-form attack rate within 3 sigma of the Monte Carlo oracle on the whole grid",
           detail);
}

// ---------------------------------------------------------------- 4

void criterion_4_direct_escrow_figure() {
    analysis::AnalysisParams escrow;
    escrow.model.contacts_total = 5;
    escrow.model.steal_probability = 1.0;
    escrow.model.contact_ignores = 0.45;
    escrow.model.contact_notifies = 0.55;
    escrow.model.trustee_fooled = 0.45;
    escrow.model.trustee_ignores = 0.275;
    escrow.model.trustee_notifies = 0.275;
    escrow.trustee_unavailable = 0.001;

    const double attack = 0.4 * analysis::attack_success_exact(escrow, 3, 5);
    const double loss = analysis::recovery_unreliability(0.001, 3, 5);
    const double failure = attack + loss;

    const bool pass = std::abs(failure - 0.0831) <= 0.0005;
    char buf[96];
    std::snprintf(buf, sizeof buf, "F = %.4f%% (target 8.31%% +/- 0.05pp)", failure * 100.0);
    report(4, pass, "direct-escrow failure figure at n=5, k=3", buf);
}

// ---------------------------------------------------------------- 5

void criterion_5_comparison_table() {
    const auto params = analysis::default_parameters();
    const auto rows = analysis::comparison_table(params, 3, 5);

    const auto value = [&](analysis::ComparisonApproach approach) {
        for (const auto& row : rows) {
            if (row.approach == approach) return row.report.failure_rate;
        }
        return -1.0;
    };

    const double local = value(analysis::ComparisonApproach::local_storage);
    const double password = value(analysis::ComparisonApproach::password);
    const double biometric = value(analysis::ComparisonApproach::biometric);
    const double indirect = value(analysis::ComparisonApproach::indirect_permission);

    bool pass = true;
    std::string detail;
    if (std::abs(local - 0.0055) > 0.0002) {
        pass = false;
        detail = "local storage out of band";
    } else if (std::abs(password - 0.0439) > 0.0005) {
        pass = false;
        detail = "password out of band";
    } else if (biometric < 0.0500 || biometric > 0.0505) {
        pass = false;
        detail = "biometric out of band";
    } else if (indirect < 1.4e-8 / 2.0 || indirect > 1.4e-8 * 2.0) {
        pass = false;
        detail = "indirect permission out of band";
    }
    if (detail.empty()) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "local %.3f%%, password %.2f%%, biometric %.2f%%, indirect %.2e",
                      local * 100.0, password * 100.0, biometric * 100.0, indirect);
        detail = buf;
    }
    report(5, pass, "comparison table at (3,5) with reference parameters", detail);
}

// ---------------------------------------------------------------- 6

void criterion_6_threshold_optimum() {
    const auto start = Clock::now();
    const auto params = analysis::default_parameters();
    bool pass = true;
    std::string detail;

    const auto scan6 = analysis::optimal_threshold(params, 6);
    if (scan6.best_threshold != 3) {
        pass = false;
        detail = "optimum for n=6 is not k=3";
    } else if (scan6.min_failure_rate < 1e-9 || scan6.min_failure_rate > 1e-7) {
        pass = false;
        detail = "minimum failure rate for n=6 outside [1e-9, 1e-7]";
    }

    std::vector<double> minima;
    for (int n = 1; n <= 10 && pass; ++n) {
        const auto scan = analysis::optimal_threshold(params, n);
        minima.push_back(scan.min_failure_rate);

        // every per-n curve must fall to its single minimum and rise after
        const auto& curve = scan.curve;
        const int best_index = scan.best_threshold - 1;
        for (size_t i = 0; i + 1 < curve.size(); ++i) {
            const bool before = static_cast<int>(i) < best_index;
            const double a = curve[i].failure_rate;
            const double b = curve[i + 1].failure_rate;
            if (before ? (b > a * (1.0 + 1e-9)) : (b < a * (1.0 - 1e-9))) {
                pass = false;
                detail = "failure curve for n=" + std::to_string(n) + " is not unimodal";
                break;
            }
        }
    }

    if (pass) {
        // the per-n minima themselves form a valley (here: strictly falling)
        size_t valley = 0;
        for (size_t i = 1; i < minima.size(); ++i) {
            if (minima[i] < minima[valley]) valley = i;
        }
        for (size_t i = 0; i + 1 < minima.size(); ++i) {
            const bool before = i < valley;
            if (before ? (minima[i + 1] > minima[i] * (1.0 + 1e-9))
                       : (minima[i + 1] < minima[i] * (1.0 - 1e-9))) {
                pass = false;
                detail = "per-n minimum sequence is not a valley";
                break;
            }
        }
    }

    const double elapsed = seconds_since(start);
    if (pass && elapsed >= 10.0) {
        pass = false;
        detail = "exceeded 10 s budget";
    }
    if (detail.empty()) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "k* = 3, F_min = %.2e, sweep %.2f s",
                      scan6.min_failure_rate, elapsed);
        detail = buf;
    }
    report(6, pass, "threshold optimisation: k*=3 at n=6 and well-shaped sweep n=1..10", detail);
}

// ---------------------------------------------------------------- 7

void criterion_7_unreliability_spot_value() {
    const double expected = 10.0 * 0.999 * 0.999 * 1e-9 + 5.0 * 0.999 * 1e-12 + 1e-15;
    const double got = analysis::recovery_unreliability(0.001, 3, 5);
    const double relative = std::abs(got - expected) / expected;
    const bool pass = relative <= 1e-12;
    char buf[96];
    std::snprintf(buf, sizeof buf, "Q = %.6e, relative error %.1e", got, relative);
    report(7, pass, "unreliability spot value 9.98501e-9 at U=0.001, (3,5)", buf);
}

// ---------------------------------------------------------------- 8

void criterion_8_tamper_suite() {
    SeededEntropy rng(9200);
    bool pass = true;
    std::string detail;

    // (a) single-bit flips anywhere in an AEAD ciphertext must fail closed
    {
        const crypto::SymmetricKey key = crypto::generate_symmetric_key(rng);
        const Bytes message = rng.next(200);
        const crypto::AeadCiphertext ct = crypto::symmetric_encrypt(key, message, rng);
        for (int trial = 0; trial < 128 && pass; ++trial) {
            crypto::AeadCiphertext corrupted = ct;
            const size_t bits = (24 + corrupted.body.size()) * 8;
            const size_t bit = rng.next_below(bits);
            if (bit < 24 * 8) {
                corrupted.nonce[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
            } else {
                const size_t body_bit = bit - 24 * 8;
                corrupted.body[body_bit / 8] ^= static_cast<uint8_t>(1u << (body_bit % 8));
            }
            try {
                crypto::symmetric_decrypt(key, corrupted);
                pass = false;
                detail = "AEAD accepted a corrupted ciphertext";
            } catch (const AuthenticationError&) {
            }
        }
    }

    // (b) single-bit flips in a trustee's sealed packet: the trustee must
    // see either nothing addressed to them or a bad signature
    if (pass) {
        const Ceremony c = make_ceremony(9201, 2, 3);
        size_t own_packet = c.bundle.sealed_packets.size();
        for (size_t i = 0; i < c.bundle.sealed_packets.size(); ++i) {
            try {
                crypto::unseal(c.trustee_keys[0], c.bundle.sealed_packets[i]);
                own_packet = i;
                break;
            } catch (const AuthenticationError&) {
            }
        }
        if (own_packet == c.bundle.sealed_packets.size()) {
            pass = false;
            detail = "trustee cannot locate their own packet";
        }
        for (int trial = 0; trial < 128 && pass; ++trial) {
            auto packets = c.bundle.sealed_packets;
            crypto::SealedBlob& target = packets[own_packet];
            const size_t bits = (32 + target.body.size()) * 8;
            const size_t bit = rng.next_below(bits);
            if (bit < 32 * 8) {
                target.ephemeral_public_key[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
            } else {
                const size_t body_bit = bit - 32 * 8;
                target.body[body_bit / 8] ^= static_cast<uint8_t>(1u << (body_bit % 8));
            }
            const auto decision = protocol::respond_to_recovery_request(
                c.trustee_keys[0], packets, c.directory, protocol::Verdict::confirmed_owner);
            const auto* refusal = std::get_if<protocol::Refusal>(&decision);
            if (!refusal || (refusal->reason != protocol::RefusalReason::not_my_packet &&
                             refusal->reason != protocol::RefusalReason::bad_signature)) {
                pass = false;
                detail = "tampered sealed packet was not rejected at the seal/signature layer";
            }
        }
    }

    // (c) a share altered after signing, re-sealed to the trustee, must be
    // rejected by signature verification
    if (pass) {
        const Ceremony c = make_ceremony(9202, 2, 3);
        RecoveryInstruction instruction;
        instruction.owner_display_name = "Alice Example";
        instruction.owner_key_fingerprint = crypto::fingerprint(c.owner.public_key());
        instruction.directory_locator = "alice";

        for (int trial = 0; trial < 128 && pass; ++trial) {
            SharePacketPlain packet;
            packet.share = sss::Share{1, rng.next(32)};
            packet.instruction = instruction;
            packet.signature =
                crypto::sign(c.owner, crypto::canonical_digest(packet.share, instruction));
            const size_t bit = rng.next_below(packet.share.payload.size() * 8);
            packet.share.payload[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));

            const auto resealed =
                crypto::seal(c.trustee_keys[0].public_key(), encode_packet(packet), rng);
            const auto decision = protocol::respond_to_recovery_request(
                c.trustee_keys[0], std::vector<crypto::SealedBlob>{resealed}, c.directory,
                protocol::Verdict::confirmed_owner);
            const auto* refusal = std::get_if<protocol::Refusal>(&decision);
            if (!refusal || refusal->reason != protocol::RefusalReason::bad_signature) {
                pass = false;
                detail = "tampered share payload was not caught by signature verification";
            }
        }
    }

    report(8, pass, "128 random corruptions each rejected at the right layer (AEAD/seal/signature)",
           detail);
}

// ---------------------------------------------------------------- 9

void criterion_9_format_stability() {
    bool pass = true;
    std::string detail;
    try {
        const Bytes raw = slurp("manifest.json");
        const auto manifest = nlohmann::json::parse(std::string(raw.begin(), raw.end()));

        const Bytes file_bytes = slurp("fixture_3of5.qrb");
        if (to_hex(crypto::sha256(file_bytes).bytes) !=
            manifest.at("bundle_sha256").get<std::string>()) {
            pass = false;
            detail = "fixture bytes drifted from the pinned hash";
        }

        const BackupBundle bundle = decode_bundle(file_bytes);
        const BackupBundle again = decode_bundle(file_bytes);
        if (pass && (!(bundle == again) || encode_bundle(bundle) != file_bytes)) {
            pass = false;
            detail = "decode/encode is not stable";
        }

        // armored copy: rewrap tolerated, single-character corruption caught
        const Bytes armored_bytes = slurp("fixture_3of5.qrb.txt");
        std::string armored(armored_bytes.begin(), armored_bytes.end());
        if (pass && !(dearmor_bundle(armored) == bundle)) {
            pass = false;
            detail = "armored fixture does not decode to the binary fixture";
        }
        if (pass) {
            std::string rewrapped = "\n  " + armored;
            const size_t first_nl = rewrapped.find('\n', 3);
            rewrapped.insert(first_nl + 20, "\n   \n");
            if (!(dearmor_bundle(rewrapped) == bundle)) {
                pass = false;
                detail = "rewrapped armor no longer decodes";
            }
        }
        if (pass) {
            SeededEntropy rng(9300);
            const size_t body_start = armored.find('\n') + 1;
            const size_t body_end = armored.find("\n=");
            int checksum_rejections = 0;
            for (int trial = 0; trial < 100; ++trial) {
                std::string corrupted = armored;
                size_t pos;
                do {
                    pos = body_start + rng.next_below(body_end - body_start);
                } while (corrupted[pos] == '\n');
                corrupted[pos] = corrupted[pos] == 'A' ? 'B' : 'A';
                try {
                    dearmor_bundle(corrupted);
                    pass = false;
                    detail = "single-character corruption survived the checksum";
                    break;
                } catch (const ArmorError& e) {
                    if (e.kind() == ArmorError::Kind::checksum_mismatch) ++checksum_rejections;
                } catch (const BundleDecodeError&) {
                }
            }
            if (pass && checksum_rejections < 95) {
                pass = false;
                detail = "corruptions were mostly rejected by something other than the checksum";
            }
        }
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    report(9, pass, "golden bundle decodes bit-stably; armor survives rewrap, rejects corruption",
           detail);
}

// ---------------------------------------------------------------- 10

void criterion_10_monotonicity() {
    const auto params = analysis::default_parameters();
    bool pass = true;
    std::string detail;

    for (int n = 1; n <= 10 && pass; ++n) {
        double previous_p = 1.0;
        double previous_q = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double p = analysis::attack_success_exact(params, k, n);
            const double q = analysis::recovery_unreliability(params.trustee_unavailable, k, n);
            if (p > previous_p * (1.0 + 1e-12)) {
                pass = false;
                detail = "P increased in k at n=" + std::to_string(n);
                break;
            }
            if (q < previous_q * (1.0 - 1e-12)) {
                pass = false;
                detail = "Q decreased in k at n=" + std::to_string(n);
                break;
            }
            previous_p = p;
            previous_q = q;
        }
    }
    for (int k = 1; k <= 10 && pass; ++k) {
        double previous_p = 0.0;
        for (int n = k; n <= 10; ++n) {
            const double p = analysis::attack_success_exact(params, k, n);
            if (p < previous_p * (1.0 - 1e-12)) {
                pass = false;
                detail = "P decreased in n at k=" + std::to_string(k);
                break;
            }
            previous_p = p;
        }
    }
    report(10, pass, "P non-increasing in k, non-decreasing in n; Q non-decreasing in k (n <= 10)",
           detail);
}

}  // namespace

int main() {
    criterion_1_protocol_round_trip();
    criterion_2_hiding_witness();
    criterion_3_oracle_grid();
    criterion_4_direct_escrow_figure();
    criterion_5_comparison_table();
    criterion_6_threshold_optimum();
    criterion_7_unreliability_spot_value();
    criterion_8_tamper_suite();
    criterion_9_format_stability();
    criterion_10_monotonicity();

    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}

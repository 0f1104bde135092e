// qrb — command line for the social-recovery backup toolkit.
//
// Owner-side: keygen, backup, inspect, recover open/request/absorb/finish,
// renew-check. Trustee-side: trustee respond. Infrastructure: directory
// add/get/serve. Analysis: analyze, optimize, compare, simulate.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrb/analysis.hpp"
#include "qrb/armor.hpp"
#include "qrb/bundle.hpp"
#include "qrb/crypto.hpp"
#include "qrb/directory.hpp"
#include "qrb/entropy.hpp"
#include "qrb/errors.hpp"
#include "qrb/protocol.hpp"
#include "qrb/tcp.hpp"
#include "qrb/transport.hpp"

namespace {

using nlohmann::json;
using namespace qrb;

Bytes read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string s = buf.str();
    return Bytes(s.begin(), s.end());
}

std::string read_file_text(const std::string& path) {
    const Bytes raw = read_file_bytes(path);
    return std::string(raw.begin(), raw.end());
}

void write_file_bytes(const std::string& path, ByteView data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
}

void write_file_text(const std::string& path, std::string_view text) {
    write_file_bytes(path, as_bytes(text));
}

std::unique_ptr<EntropySource> make_entropy(const std::optional<uint64_t>& seed) {
    if (seed) {
        return std::make_unique<SeededEntropy>(*seed);
    }
    return std::make_unique<SystemEntropy>();
}

// ---------------------------------------------------------------- sessions

// Owner-side recovery state between CLI invocations. Holds the bundle and
// the absorbed shares; the live session state is recomputed on load.
struct SessionFile {
    BackupBundle bundle;
    std::vector<sss::Share> shares;
    bool finished = false;

    static SessionFile load(const std::string& path) {
        json doc;
        try {
            doc = json::parse(read_file_text(path));
        } catch (const json::exception& e) {
            throw Error("session file '" + path + "' is not valid JSON: " + std::string(e.what()));
        }
        SessionFile session;
        session.bundle = decode_bundle(base64_decode(doc.at("bundle").get<std::string>()));
        session.finished = doc.value("finished", false);
        for (const auto& [key, value] : doc.at("shares").items()) {
            sss::Share share;
            share.index = static_cast<uint8_t>(std::stoi(key));
            share.payload = base64_decode(value.get<std::string>());
            session.shares.push_back(std::move(share));
        }
        return session;
    }

    void save(const std::string& path) const {
        json doc;
        doc["bundle"] = base64_encode(encode_bundle(bundle));
        doc["finished"] = finished;
        json share_map = json::object();
        for (const sss::Share& share : shares) {
            share_map[std::to_string(share.index)] = base64_encode(share.payload);
        }
        doc["shares"] = std::move(share_map);
        write_file_text(path, doc.dump(2) + "\n");
    }

    protocol::RecoverySession to_session() const {
        if (finished) {
            throw Error("session is already finished");
        }
        protocol::RecoverySession session(bundle);
        for (const sss::Share& share : shares) {
            session.absorb(protocol::ShareResponse{share});
        }
        return session;
    }
};

// ---------------------------------------------------------------- analysis

struct ModelFlags {
    std::optional<int> contacts;
    std::optional<double> p_steal, p1, q1, q2, q3, unavailable;

    void attach(CLI::App* cmd) {
        cmd->add_option("--contacts", contacts, "contact list size N");
        cmd->add_option("--p-steal", p_steal, "backup steal probability");
        cmd->add_option("--p1", p1, "contact ignores probability (p2 = 1 - p1)");
        cmd->add_option("--q1", q1, "trustee ignores probability");
        cmd->add_option("--q2", q2, "trustee notifies probability");
        cmd->add_option("--q3", q3, "trustee fooled probability");
        cmd->add_option("--unavailable", unavailable, "trustee unavailability U");
    }

    analysis::AnalysisParams build() const {
        analysis::AnalysisParams params = analysis::default_parameters();
        if (contacts) params.model.contacts_total = *contacts;
        if (p_steal) params.model.steal_probability = *p_steal;
        if (p1) {
            params.model.contact_ignores = *p1;
            params.model.contact_notifies = 1.0 - *p1;
        }
        if (q3) {
            params.model.trustee_fooled = *q3;
            params.model.trustee_ignores = (1.0 - *q3) / 2.0;
            params.model.trustee_notifies = (1.0 - *q3) / 2.0;
        }
        if (q1) {
            params.model.trustee_ignores = *q1;
            params.model.trustee_notifies = 1.0 - params.model.trustee_fooled - *q1;
        }
        if (q2) params.model.trustee_notifies = *q2;
        if (unavailable) params.trustee_unavailable = *unavailable;
        params.validate();
        return params;
    }
};

void print_failure_table(const analysis::ThresholdScan& scan) {
    std::printf("  k   P (attack)      Q (loss)        F (failure)\n");
    for (const auto& report : scan.curve) {
        std::printf("%3d   %.6e    %.6e    %.6e%s\n", report.threshold, report.attack_success,
                    report.recovery_failure, report.failure_rate,
                    report.threshold == scan.best_threshold ? "   <- minimum" : "");
    }
}

// ---------------------------------------------------------------- commands

int cmd_keygen(const std::string& out_prefix, const std::optional<uint64_t>& seed) {
    auto rng = make_entropy(seed);
    const crypto::KeyPair keypair = crypto::generate_identity_keypair(*rng);
    crypto::save_public_key(out_prefix + ".pub", keypair.public_key());
    crypto::save_keypair(out_prefix + ".key", keypair);
    std::printf("wrote %s.pub and %s.key (fingerprint %s)\n", out_prefix.c_str(),
                out_prefix.c_str(), crypto::fingerprint(keypair.public_key()).c_str());
    return 0;
}

std::unique_ptr<IdentityDirectory> open_directory(const std::string& db, const std::string& host,
                                                  uint16_t port) {
    if (!db.empty()) {
        return std::make_unique<InMemoryDirectory>(load_directory_file(db));
    }
    if (port != 0) {
        return std::make_unique<net::RemoteDirectory>(host, port);
    }
    throw Error("pass either --db or --host/--port to reach a directory");
}

int cmd_backup(const std::string& secret_path, const std::string& owner_key_path,
               const std::vector<std::string>& trustee_paths, int threshold,
               const std::string& instruction_path, const std::string& out_path,
               const std::string& mode_name, bool armored, const std::optional<uint64_t>& seed) {
    const Bytes secret = read_file_bytes(secret_path);
    const crypto::KeyPair owner = crypto::load_keypair(owner_key_path);

    std::vector<protocol::TrusteeDescriptor> trustees;
    for (const std::string& path : trustee_paths) {
        trustees.push_back({path, crypto::load_public_key(path)});
    }

    RecoveryInstruction instruction = parse_instruction_file(read_file_text(instruction_path));
    const std::string owner_fp = crypto::fingerprint(owner.public_key());
    if (instruction.owner_key_fingerprint.empty()) {
        instruction.owner_key_fingerprint = owner_fp;
    } else if (instruction.owner_key_fingerprint != owner_fp) {
        throw Error("instruction owner_key_fingerprint does not match --owner-key (" +
                    instruction.owner_key_fingerprint + " vs " + owner_fp + ")");
    }

    const BackupMode mode = mode_name == "indirect-escrow" ? BackupMode::indirect_escrow
                                                           : BackupMode::indirect_permission;
    auto rng = make_entropy(seed);
    const BackupBundle bundle =
        protocol::create_backup(owner, secret, trustees, threshold, instruction, mode, *rng);
    save_bundle(out_path, bundle, armored);
    std::printf("wrote %s: %s, threshold %d of %d, %zu sealed packets\n", out_path.c_str(),
                std::string(to_string(mode)).c_str(), threshold, static_cast<int>(trustees.size()),
                bundle.sealed_packets.size());
    return 0;
}

int cmd_inspect(const std::string& bundle_path) {
    const BackupBundle bundle = load_bundle(bundle_path);
    std::printf("file:      %s\n", bundle_path.c_str());
    std::printf("version:   %u\n", bundle.version);
    std::printf("mode:      %s\n", std::string(to_string(bundle.mode)).c_str());
    std::printf("threshold: %u of %u\n", bundle.threshold_k, bundle.trustee_count_n);
    std::printf("packets:   %zu sealed (recipient-anonymous)\n", bundle.sealed_packets.size());
    if (bundle.encrypted_secret) {
        std::printf("secret:    encrypted, %zu octets\n", bundle.encrypted_secret->body.size());
    } else {
        std::printf("secret:    not stored (escrow mode)\n");
    }
    return 0;
}

int cmd_recover_open(const std::string& bundle_path, const std::string& session_path) {
    SessionFile session;
    session.bundle = load_bundle(bundle_path);
    session.save(session_path);
    std::printf("session %s opened: need %u of %u shares\n", session_path.c_str(),
                session.bundle.threshold_k, session.bundle.trustee_count_n);
    return 0;
}

int cmd_recover_request(const std::string& session_path, const std::string& out_path) {
    const SessionFile session = SessionFile::load(session_path);
    const transport::RecoveryRequest request{session.bundle.sealed_packets};
    write_file_bytes(out_path, transport::encode_frame(request));
    std::printf("wrote recovery request (%zu sealed packets) to %s\n",
                request.sealed_packets.size(), out_path.c_str());
    return 0;
}

int cmd_trustee_respond(const std::string& key_path, const std::string& request_path,
                        const std::string& verdict_name, const std::string& db,
                        const std::string& host, uint16_t port, const std::string& out_path) {
    const crypto::KeyPair trustee = crypto::load_keypair(key_path);
    const transport::Message incoming = transport::decode_frame(read_file_bytes(request_path));
    const auto* request = std::get_if<transport::RecoveryRequest>(&incoming);
    if (!request) {
        throw Error("'" + request_path + "' does not hold a recovery request frame");
    }

    protocol::Verdict verdict = protocol::Verdict::ignored;
    if (verdict_name == "confirmed") {
        verdict = protocol::Verdict::confirmed_owner;
    } else if (verdict_name == "rejected") {
        verdict = protocol::Verdict::rejected;
    } else if (verdict_name != "ignored") {
        throw Error("verdict must be confirmed|rejected|ignored");
    }

    const auto directory = open_directory(db, host, port);
    const protocol::TrusteeDecision decision = protocol::respond_to_recovery_request(
        trustee, request->sealed_packets, *directory, verdict);

    if (const auto* response = std::get_if<protocol::ShareResponse>(&decision)) {
        write_file_bytes(out_path, transport::encode_frame(*response));
        std::printf("share released (index %u) -> %s\n", response->share.index, out_path.c_str());
    } else {
        const auto& refusal = std::get<protocol::Refusal>(decision);
        write_file_bytes(out_path, transport::encode_frame(refusal));
        std::printf("refused: %s -> %s\n", std::string(to_string(refusal.reason)).c_str(),
                    out_path.c_str());
    }
    return 0;
}

int cmd_recover_absorb(const std::string& session_path, const std::string& response_path) {
    SessionFile session = SessionFile::load(session_path);
    const transport::Message incoming = transport::decode_frame(read_file_bytes(response_path));

    if (const auto* refusal = std::get_if<protocol::Refusal>(&incoming)) {
        std::fprintf(stderr, "trustee refused: %s\n",
                     std::string(to_string(refusal->reason)).c_str());
        return 3;
    }
    const auto* response = std::get_if<protocol::ShareResponse>(&incoming);
    if (!response) {
        throw Error("'" + response_path + "' does not hold a share response or refusal frame");
    }

    protocol::RecoverySession live = session.to_session();
    live.absorb(*response);
    session.shares = live.collected_shares();
    session.save(session_path);
    std::printf("absorbed share %u: %zu of %u collected (%s)\n", response->share.index,
                live.collected_count(), session.bundle.threshold_k,
                std::string(to_string(live.state())).c_str());
    return 0;
}

int cmd_recover_finish(const std::string& session_path, const std::string& out_path) {
    SessionFile session = SessionFile::load(session_path);
    protocol::RecoverySession live = session.to_session();
    const Bytes secret = live.finish();
    write_file_bytes(out_path, secret);
    session.finished = true;
    session.save(session_path);
    std::printf("recovered %zu-octet secret -> %s\n", secret.size(), out_path.c_str());
    std::printf("destroy this backup and create a fresh one with new trustees\n");
    return 0;
}

int cmd_renew_check(const std::string& db, const std::string& host, uint16_t port,
                    const std::vector<std::string>& trustee_specs) {
    std::vector<protocol::TrusteeDescriptor> trustees;
    for (const std::string& spec : trustee_specs) {
        const size_t eq = spec.find('=');
        if (eq == std::string::npos) {
            throw Error("--trustee expects LOCATOR=PUBKEYFILE, got '" + spec + "'");
        }
        trustees.push_back({spec.substr(0, eq), crypto::load_public_key(spec.substr(eq + 1))});
    }
    const auto directory = open_directory(db, host, port);
    const protocol::RenewalReport report = protocol::check_trustee_keys(*directory, trustees);
    for (const auto& t : report.changed) {
        std::printf("changed:     %s\n", t.identity_label.c_str());
    }
    for (const auto& t : report.unavailable) {
        std::printf("unavailable: %s\n", t.identity_label.c_str());
    }
    if (report.all_clear()) {
        std::printf("all %zu trustee keys unchanged\n", trustees.size());
    } else {
        std::printf("renew the backup for the trustees listed above\n");
    }
    return 0;
}

std::atomic<bool> g_stop{false};

int cmd_directory_serve(const std::string& db, uint16_t port) {
    const InMemoryDirectory directory = load_directory_file(db);
    const net::Socket listener = net::listen_on(port);
    std::signal(SIGINT, [](int) { g_stop = true; });
    std::signal(SIGTERM, [](int) { g_stop = true; });
    std::printf("directory with %zu entries listening on 127.0.0.1:%u\n",
                directory.entries().size(), net::local_port(listener));
    std::fflush(stdout);
    net::serve_directory(listener, directory, g_stop);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"social-recovery key backup toolkit"};
    app.require_subcommand(1);

    std::optional<uint64_t> seed;
    app.add_option("--seed", seed,
                   "derive all randomness from this seed (reproducible artifacts; "
                   "omit for the secure system source)");

    // keygen
    std::string keygen_out;
    auto* keygen = app.add_subcommand("keygen", "generate an identity keypair");
    keygen->add_option("--out", keygen_out, "output path prefix")->required();

    // directory
    auto* directory_cmd = app.add_subcommand("directory", "public-key directory operations");
    directory_cmd->require_subcommand(1);
    std::string dir_db, dir_locator, dir_key_path, dir_host = "127.0.0.1", dir_out;
    uint16_t dir_port = 0;
    auto* dir_add = directory_cmd->add_subcommand("add", "register a key in a directory file");
    dir_add->add_option("--db", dir_db, "directory JSON file")->required();
    dir_add->add_option("--locator", dir_locator, "name to register")->required();
    dir_add->add_option("--key", dir_key_path, "public key file")->required();
    auto* dir_get = directory_cmd->add_subcommand("get", "look up a key");
    dir_get->add_option("--db", dir_db, "directory JSON file");
    dir_get->add_option("--host", dir_host, "directory server host");
    dir_get->add_option("--port", dir_port, "directory server port");
    dir_get->add_option("--locator", dir_locator, "name to look up")->required();
    dir_get->add_option("--out", dir_out, "write the armored key here instead of stdout");
    auto* dir_serve = directory_cmd->add_subcommand("serve", "serve lookups over TCP");
    dir_serve->add_option("--db", dir_db, "directory JSON file")->required();
    dir_serve->add_option("--port", dir_port, "listen port (0 = ephemeral)");

    // backup
    std::string backup_secret, backup_owner_key, backup_instruction, backup_out;
    std::string backup_mode = "indirect-permission";
    std::vector<std::string> backup_trustees;
    int backup_threshold = 0;
    bool backup_armor = false;
    auto* backup = app.add_subcommand("backup", "create a backup bundle");
    backup->add_option("--secret", backup_secret, "file holding the secret to protect")
        ->required();
    backup->add_option("--owner-key", backup_owner_key, "owner private key file")->required();
    backup->add_option("--trustee", backup_trustees, "trustee public key file (repeat n times)")
        ->required();
    backup->add_option("-k,--threshold", backup_threshold, "recovery threshold k")->required();
    backup->add_option("--instruction", backup_instruction, "key=value instruction file")
        ->required();
    backup->add_option("--out", backup_out, "output bundle path")->required();
    backup->add_option("--mode", backup_mode, "indirect-permission | indirect-escrow")
        ->check(CLI::IsMember({"indirect-permission", "indirect-escrow"}));
    backup->add_flag("--armor", backup_armor, "write printable armor instead of binary");

    // inspect
    std::string inspect_path;
    auto* inspect = app.add_subcommand("inspect", "show bundle metadata");
    inspect->add_option("bundle", inspect_path, "bundle file")->required();

    // recover
    auto* recover = app.add_subcommand("recover", "owner-side recovery ceremony");
    recover->require_subcommand(1);
    std::string rec_bundle, rec_session, rec_out, rec_response;
    auto* rec_open = recover->add_subcommand("open", "start a recovery session");
    rec_open->add_option("--bundle", rec_bundle, "bundle file")->required();
    rec_open->add_option("--session", rec_session, "session state file to create")->required();
    auto* rec_request = recover->add_subcommand("request", "emit the recovery request frame");
    rec_request->add_option("--session", rec_session, "session state file")->required();
    rec_request->add_option("--out", rec_out, "request frame output")->required();
    auto* rec_absorb = recover->add_subcommand("absorb", "absorb a trustee response frame");
    rec_absorb->add_option("--session", rec_session, "session state file")->required();
    rec_absorb->add_option("--response", rec_response, "response frame file")->required();
    auto* rec_finish = recover->add_subcommand("finish", "combine shares and recover the secret");
    rec_finish->add_option("--session", rec_session, "session state file")->required();
    rec_finish->add_option("--out", rec_out, "recovered secret output")->required();

    // trustee
    auto* trustee_cmd = app.add_subcommand("trustee", "trustee-side operations");
    trustee_cmd->require_subcommand(1);
    std::string tr_key, tr_request, tr_verdict, tr_db, tr_host = "127.0.0.1", tr_out;
    uint16_t tr_port = 0;
    auto* tr_respond = trustee_cmd->add_subcommand("respond", "answer a recovery request");
    tr_respond->add_option("--key", tr_key, "trustee private key file")->required();
    tr_respond->add_option("--request", tr_request, "recovery request frame file")->required();
    tr_respond
        ->add_option("--verdict", tr_verdict,
                     "social-authentication outcome: confirmed | rejected | ignored")
        ->required();
    tr_respond->add_option("--db", tr_db, "directory JSON file");
    tr_respond->add_option("--host", tr_host, "directory server host");
    tr_respond->add_option("--port", tr_port, "directory server port");
    tr_respond->add_option("--out", tr_out, "response frame output")->required();

    // renew-check
    auto* renew = app.add_subcommand("renew-check", "compare trustee keys against a directory");
    std::vector<std::string> renew_trustees;
    std::string renew_db, renew_host = "127.0.0.1";
    uint16_t renew_port = 0;
    renew->add_option("--trustee", renew_trustees, "LOCATOR=PUBKEYFILE (repeatable)")->required();
    renew->add_option("--db", renew_db, "directory JSON file");
    renew->add_option("--host", renew_host, "directory server host");
    renew->add_option("--port", renew_port, "directory server port");

    // analysis commands
    ModelFlags analyze_flags, optimize_flags, compare_flags, simulate_flags;
    int analyze_n = 6;
    bool analyze_csv = false;
    auto* analyze = app.add_subcommand("analyze", "failure-rate curve over k for one n");
    analyze->add_option("-n,--trustees", analyze_n, "number of trustees n");
    analyze->add_flag("--csv", analyze_csv, "emit CSV instead of a table");
    analyze_flags.attach(analyze);

    int optimize_n_max = 10;
    bool optimize_csv = false;
    auto* optimize = app.add_subcommand("optimize", "best threshold for each n = 1..n-max");
    optimize->add_option("--n-max", optimize_n_max, "largest trustee count to scan");
    optimize->add_flag("--csv", optimize_csv, "emit CSV instead of a table");
    optimize_flags.attach(optimize);

    int compare_k = 3, compare_n = 5;
    bool compare_csv = false;
    auto* compare = app.add_subcommand("compare", "failure-rate comparison of backup approaches");
    compare->add_option("-k,--threshold", compare_k, "threshold for the escrow rows");
    compare->add_option("-n,--trustees", compare_n, "trustee count for the escrow rows");
    compare->add_flag("--csv", compare_csv, "emit CSV instead of a table");
    compare_flags.attach(compare);

    int sim_k = 3, sim_n = 5, sim_workers = 1;
    uint64_t sim_trials = 1000000, sim_seed = 1;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the attack model");
    simulate->add_option("-k,--threshold", sim_k, "recovery threshold k");
    simulate->add_option("-n,--trustees", sim_n, "number of trustees n");
    simulate->add_option("--trials", sim_trials, "number of simulated walks");
    simulate->add_option("--sim-seed", sim_seed, "simulation seed");
    simulate->add_option("--workers", sim_workers, "worker threads");
    simulate_flags.attach(simulate);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*keygen) return cmd_keygen(keygen_out, seed);

        if (*directory_cmd) {
            if (*dir_add) {
                InMemoryDirectory directory;
                if (std::filesystem::exists(dir_db)) {
                    directory = load_directory_file(dir_db);
                }
                directory.add(dir_locator, crypto::load_public_key(dir_key_path));
                save_directory_file(dir_db, directory);
                std::printf("registered '%s' in %s (%zu entries)\n", dir_locator.c_str(),
                            dir_db.c_str(), directory.entries().size());
                return 0;
            }
            if (*dir_get) {
                const auto directory = open_directory(dir_db, dir_host, dir_port);
                const auto key = directory->lookup(dir_locator);
                if (!key) {
                    std::fprintf(stderr, "locator '%s' not found\n", dir_locator.c_str());
                    return 4;
                }
                const std::string armored = armor::armor(crypto::kPublicKeyLabel, key->bytes,
                                                         /*with_checksum=*/false);
                if (dir_out.empty()) {
                    std::fputs(armored.c_str(), stdout);
                } else {
                    write_file_text(dir_out, armored);
                }
                return 0;
            }
            if (*dir_serve) return cmd_directory_serve(dir_db, dir_port);
        }

        if (*backup) {
            return cmd_backup(backup_secret, backup_owner_key, backup_trustees, backup_threshold,
                              backup_instruction, backup_out, backup_mode, backup_armor, seed);
        }
        if (*inspect) return cmd_inspect(inspect_path);

        if (*recover) {
            if (*rec_open) return cmd_recover_open(rec_bundle, rec_session);
            if (*rec_request) return cmd_recover_request(rec_session, rec_out);
            if (*rec_absorb) return cmd_recover_absorb(rec_session, rec_response);
            if (*rec_finish) return cmd_recover_finish(rec_session, rec_out);
        }
        if (*trustee_cmd && *tr_respond) {
            return cmd_trustee_respond(tr_key, tr_request, tr_verdict, tr_db, tr_host, tr_port,
                                       tr_out);
        }
        if (*renew) return cmd_renew_check(renew_db, renew_host, renew_port, renew_trustees);

        if (*analyze) {
            const auto scan = analysis::optimal_threshold(analyze_flags.build(), analyze_n);
            if (analyze_csv) {
                std::ostringstream out;
                analysis::write_curve_csv(out, scan);
                std::fputs(out.str().c_str(), stdout);
            } else {
                print_failure_table(scan);
            }
            return 0;
        }
        if (*optimize) {
            const auto params = optimize_flags.build();
            std::vector<analysis::ThresholdScan> scans;
            for (int n = 1; n <= optimize_n_max; ++n) {
                scans.push_back(analysis::optimal_threshold(params, n));
            }
            if (optimize_csv) {
                std::ostringstream out;
                analysis::write_optima_csv(out, scans);
                std::fputs(out.str().c_str(), stdout);
            } else {
                std::printf("  n   best k   F_min\n");
                for (const auto& scan : scans) {
                    std::printf("%3d   %6d   %.6e\n", scan.trustee_count, scan.best_threshold,
                                scan.min_failure_rate);
                }
            }
            return 0;
        }
        if (*compare) {
            const auto rows =
                analysis::comparison_table(compare_flags.build(), compare_k, compare_n);
            if (compare_csv) {
                std::ostringstream out;
                analysis::write_comparison_csv(out, rows);
                std::fputs(out.str().c_str(), stdout);
            } else {
                std::printf("%-22s %-15s %-15s %s\n", "approach", "P (attack)", "Q (loss)",
                            "F (failure)");
                for (const auto& row : rows) {
                    std::printf("%-22s %.6e    %.6e    %.6e\n",
                                std::string(to_string(row.approach)).c_str(),
                                row.report.attack_success, row.report.recovery_failure,
                                row.report.failure_rate);
                }
            }
            return 0;
        }
        if (*simulate) {
            const auto params = simulate_flags.build();
            const auto result =
                analysis::simulate_attack(params, sim_k, sim_n, sim_trials, sim_seed, sim_workers);
            const double exact = analysis::attack_success_exact(params, sim_k, sim_n);
            std::printf("trials:    %llu (seed %llu, %d workers)\n",
                        static_cast<unsigned long long>(result.trials),
                        static_cast<unsigned long long>(sim_seed), sim_workers);
            std::printf("successes: %llu\n", static_cast<unsigned long long>(result.successes));
            std::printf("estimate:  %.6e +/- %.6e (1 sigma)\n", result.estimate, result.std_error);
            std::printf("exact:     %.6e\n", exact);
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}

#include "qrb/transport.hpp"

#include <atomic>
#include <thread>

#include "doctest.h"
#include "qrb/errors.hpp"
#include "qrb/tcp.hpp"

using namespace qrb;
using transport::DirectoryLookup;
using transport::DirectoryReply;
using transport::Message;
using transport::RecoveryRequest;

namespace {

std::vector<Message> sample_messages(SeededEntropy& rng) {
    const crypto::KeyPair recipient = crypto::generate_identity_keypair(rng);
    RecoveryRequest request;
    request.sealed_packets.push_back(crypto::seal(recipient.public_key(), rng.next(50), rng));
    request.sealed_packets.push_back(crypto::seal(recipient.public_key(), rng.next(80), rng));

    return {
        request,
        protocol::ShareResponse{sss::Share{3, rng.next(32)}},
        protocol::Refusal{protocol::RefusalReason::ownership_rejected},
        DirectoryLookup{"alice"},
        DirectoryReply{recipient.public_key()},
        DirectoryReply{std::nullopt},
    };
}

}  // namespace

TEST_CASE("every message kind round-trips through a frame") {
    SeededEntropy rng(70);
    for (const Message& message : sample_messages(rng)) {
        const Bytes frame = transport::encode_frame(message);
        CHECK(transport::decode_frame(frame) == message);
    }
}

TEST_CASE("frame error taxonomy") {
    SeededEntropy rng(71);
    const Bytes frame = transport::encode_frame(DirectoryLookup{"bob"});

    SUBCASE("unknown kind octet") {
        Bytes bad = frame;
        bad[4] = 99;
        try {
            transport::decode_frame(bad);
            FAIL("expected FrameError");
        } catch (const FrameError& e) {
            CHECK(e.kind() == FrameError::Kind::unknown_kind);
        }
    }
    SUBCASE("truncation") {
        Bytes bad = frame;
        bad.pop_back();
        try {
            transport::decode_frame(bad);
            FAIL("expected FrameError");
        } catch (const FrameError& e) {
            CHECK(e.kind() == FrameError::Kind::truncation);
        }
    }
    SUBCASE("declared length beyond the limit") {
        Bytes bad = frame;
        bad[0] = 0xFF;  // length prefix far above 16 MiB
        try {
            transport::decode_frame(bad);
            FAIL("expected FrameError");
        } catch (const FrameError& e) {
            CHECK(e.kind() == FrameError::Kind::oversize);
        }
    }
    SUBCASE("trailing bytes after the frame") {
        Bytes bad = frame;
        bad.push_back(0);
        try {
            transport::decode_frame(bad);
            FAIL("expected FrameError");
        } catch (const FrameError& e) {
            CHECK(e.kind() == FrameError::Kind::trailing_bytes);
        }
    }
}

TEST_CASE("concatenated frames decode back to the original sequence") {
    SeededEntropy rng(72);
    const std::vector<Message> messages = sample_messages(rng);
    Bytes stream;
    for (const Message& message : messages) {
        append_bytes(stream, transport::encode_frame(message));
    }
    const std::vector<Message> decoded = transport::decode_frame_sequence(stream);
    REQUIRE(decoded.size() == messages.size());
    for (size_t i = 0; i < messages.size(); ++i) {
        CHECK(decoded[i] == messages[i]);
    }
}

TEST_CASE("simulated network delivers in order between registered parties") {
    transport::SimulatedNetwork network;
    network.register_party("alice");
    network.register_party("bob");

    network.deliver("alice", "bob", DirectoryLookup{"first"});
    network.deliver("alice", "bob", DirectoryLookup{"second"});

    const auto first = network.receive("bob");
    REQUIRE(first.has_value());
    CHECK(first->first == "alice");
    CHECK(std::get<DirectoryLookup>(first->second).locator == "first");

    const auto second = network.receive("bob");
    REQUIRE(second.has_value());
    CHECK(std::get<DirectoryLookup>(second->second).locator == "second");

    CHECK_FALSE(network.receive("bob").has_value());
}

TEST_CASE("simulated network rejects unknown parties") {
    transport::SimulatedNetwork network;
    network.register_party("alice");
    CHECK_THROWS_AS(network.deliver("alice", "nobody", DirectoryLookup{"x"}), UnknownPartyError);
    CHECK_THROWS_AS(network.deliver("nobody", "alice", DirectoryLookup{"x"}), UnknownPartyError);
    CHECK_THROWS_AS(network.receive("nobody"), UnknownPartyError);
}

TEST_CASE("drop knob at 1.0 keeps the inbox empty") {
    transport::SimulatedNetwork network(7);
    network.register_party("alice");
    network.register_party("bob");
    network.set_drop_probability(1.0);
    for (int i = 0; i < 10; ++i) {
        network.deliver("alice", "bob", DirectoryLookup{"x"});
    }
    CHECK_FALSE(network.receive("bob").has_value());
    CHECK_THROWS_AS(network.set_drop_probability(1.5), ParamError);
}

TEST_CASE("delay knob holds messages until enough steps pass") {
    transport::SimulatedNetwork network;
    network.register_party("alice");
    network.register_party("bob");
    network.set_delay_steps(2);
    network.deliver("alice", "bob", DirectoryLookup{"x"});
    CHECK_FALSE(network.receive("bob").has_value());
    network.step();
    CHECK_FALSE(network.receive("bob").has_value());
    network.step();
    CHECK(network.receive("bob").has_value());
}

TEST_CASE("full ceremony over the simulated network matches the in-process result") {
    SeededEntropy rng(73);
    const crypto::KeyPair owner = crypto::generate_identity_keypair(rng);
    std::vector<crypto::KeyPair> trustee_keys;
    std::vector<protocol::TrusteeDescriptor> trustees;
    for (int i = 0; i < 5; ++i) {
        trustee_keys.push_back(crypto::generate_identity_keypair(rng));
        trustees.push_back({"t" + std::to_string(i), trustee_keys.back().public_key()});
    }
    const Bytes secret = rng.next(64);

    RecoveryInstruction instruction;
    instruction.owner_display_name = "Alice";
    instruction.owner_key_fingerprint = crypto::fingerprint(owner.public_key());
    instruction.directory_locator = "alice";

    InMemoryDirectory directory;
    directory.add("alice", owner.public_key());

    const BackupBundle bundle = protocol::create_backup(
        owner, secret, trustees, 3, instruction, BackupMode::indirect_permission, rng);

    // In-process reference ceremony.
    protocol::RecoverySession reference(bundle);
    for (int i = 0; i < 3; ++i) {
        const auto decision = protocol::respond_to_recovery_request(
            trustee_keys[static_cast<size_t>(i)], bundle.sealed_packets, directory,
            protocol::Verdict::confirmed_owner);
        reference.absorb(std::get<protocol::ShareResponse>(decision));
    }
    const Bytes reference_secret = reference.finish();
    REQUIRE(reference_secret == secret);

    // The same ceremony, but every exchange crosses the simulated network.
    transport::SimulatedNetwork network;
    network.register_party("owner");
    for (int i = 0; i < 5; ++i) network.register_party("t" + std::to_string(i));

    protocol::RecoverySession session(bundle);
    for (int i = 0; i < 3; ++i) {
        const std::string trustee_id = "t" + std::to_string(i);
        network.deliver("owner", trustee_id, RecoveryRequest{bundle.sealed_packets});

        const auto incoming = network.receive(trustee_id);
        REQUIRE(incoming.has_value());
        const auto& request = std::get<RecoveryRequest>(incoming->second);
        const auto decision = protocol::respond_to_recovery_request(
            trustee_keys[static_cast<size_t>(i)], request.sealed_packets, directory,
            protocol::Verdict::confirmed_owner);
        REQUIRE(std::holds_alternative<protocol::ShareResponse>(decision));
        network.deliver(trustee_id, "owner", std::get<protocol::ShareResponse>(decision));

        const auto response = network.receive("owner");
        REQUIRE(response.has_value());
        session.absorb(std::get<protocol::ShareResponse>(response->second));
    }
    CHECK(session.finish() == reference_secret);
}

TEST_CASE("directory lookups work over a real socket") {
    SeededEntropy rng(74);
    const crypto::KeyPair owner = crypto::generate_identity_keypair(rng);
    InMemoryDirectory directory;
    directory.add("alice", owner.public_key());

    net::Socket listener = net::listen_on(0);
    const uint16_t port = net::local_port(listener);
    std::atomic<bool> stop{false};
    std::thread server([&] { net::serve_directory(listener, directory, stop); });

    const net::RemoteDirectory remote("127.0.0.1", port);
    const auto found = remote.lookup("alice");
    REQUIRE(found.has_value());
    CHECK(*found == owner.public_key());
    CHECK_FALSE(remote.lookup("nobody").has_value());

    stop = true;
    server.join();
    listener = net::Socket();  // release the port

    // With the server gone, lookups report unavailability.
    const net::RemoteDirectory dead("127.0.0.1", port);
    CHECK_THROWS_AS(dead.lookup("alice"), DirectoryError);
}

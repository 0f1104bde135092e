#pragma once

#include <stdexcept>
#include <string>

namespace qrb {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad threshold, empty secret, ...).
class ParamError : public Error {
public:
    using Error::Error;
};

/// Fewer distinct shares than the recovery threshold.
class InsufficientSharesError : public Error {
public:
    using Error::Error;
};

/// Two shares carried the same evaluation point.
class DuplicateShareIndexError : public Error {
public:
    using Error::Error;
};

/// Share payloads of unequal length cannot belong to one split.
class ShareLengthMismatchError : public Error {
public:
    using Error::Error;
};

/// Two trustees in one backup presented the same public key.
class DuplicateTrusteeKeyError : public Error {
public:
    using Error::Error;
};

/// The system randomness source could not be initialised or read.
class EntropyError : public Error {
public:
    using Error::Error;
};

/// AEAD tag check, seal opening or signature parsing rejected the input.
class AuthenticationError : public Error {
public:
    using Error::Error;
};

/// Input bytes do not parse as the expected structure (wrong length, bad enum, ...).
class MalformedInputError : public Error {
public:
    using Error::Error;
};

/// A recovery-session operation was attempted in the wrong state.
class SessionStateError : public Error {
public:
    using Error::Error;
};

/// Identity-directory lookup failed (service unreachable or locator unknown).
class DirectoryError : public Error {
public:
    using Error::Error;
};

/// Message addressed to a party the simulated network does not know.
class UnknownPartyError : public Error {
public:
    using Error::Error;
};

class BundleDecodeError : public Error {
public:
    enum class Kind {
        magic_mismatch,
        version_unsupported,
        truncation,
        structure,       // k > n, mode/secret mismatch, bad enum values
        trailing_bytes,
    };

    BundleDecodeError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

class ArmorError : public Error {
public:
    enum class Kind {
        bad_header,
        checksum_mismatch,
        bad_encoding,
    };

    ArmorError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

class FrameError : public Error {
public:
    enum class Kind {
        truncation,
        unknown_kind,
        oversize,
        trailing_bytes,
    };

    FrameError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

}  // namespace qrb

#pragma once

#include <stdexcept>
#include <string>

namespace qreplica {

// Violated precondition: wrong dimensions, non-unitary input, bad index.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A dense state or operator would exceed the configured size limit.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

// Malformed external input (JSON, tape text).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Base for failures of the replication cycle itself.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A cloned cell did not come out as |k>|k>.
class ReplicationIntegrityError : public IntegrityError {
public:
    using IntegrityError::IntegrityError;
};

// The registry decoded from a child's tape differs from the parent's.
class CorruptedHeredityError : public IntegrityError {
public:
    using IntegrityError::IntegrityError;
};

// A program or tape state is not one of the orthogonal basis tapes, or its
// segments are not registered.
class UndecodableProgramError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qreplica

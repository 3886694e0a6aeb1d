#pragma once

#include <stdexcept>
#include <string>

namespace cesaro {

/// Malformed inputs: index out of range, length mismatch, invalid masses.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Per-atom metadata is missing (Unknown in exact mode) or contradicted by the data.
class MetadataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An L1 certificate could not be issued because the bound was violated.
class CertificateError : public std::runtime_error {
public:
    CertificateError(const std::string& what, std::size_t position, unsigned atom_label)
        : std::runtime_error(what), position_(position), atom_label_(atom_label) {}

    std::size_t position() const noexcept { return position_; }
    unsigned atom_label() const noexcept { return atom_label_; }

private:
    std::size_t position_;
    unsigned atom_label_;
};

/// A generator specification violates one of its structural hypotheses.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Experiment configuration could not be parsed; the message names the key path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cesaro

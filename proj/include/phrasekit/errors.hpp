#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phrasekit {

// Base for every error thrown by the library. The CLI maps the three
// families below onto exit codes 2, 3 and 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad caller input or bad data files (exit code 2).
class InputError : public Error {
public:
    using Error::Error;
};

// Model service / transport failures (exit code 3).
class ProviderError : public Error {
public:
    using Error::Error;
};

// Broken internal invariant (exit code 4).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public InputError {
public:
    using InputError::InputError;
};

class ZeroVector : public InputError {
public:
    ZeroVector() : InputError("vector norm is below 1e-12") {}
};

class DimensionMismatch : public InputError {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : InputError("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                     std::to_string(got)) {}
};

class LengthMismatch : public InputError {
public:
    LengthMismatch(std::size_t a, std::size_t b)
        : InputError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class MalformedLine : public InputError {
public:
    MalformedLine(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnresolvedSeed : public InputError {
public:
    explicit UnresolvedSeed(std::vector<std::string> missing);
    const std::vector<std::string>& missing() const noexcept { return missing_; }

private:
    std::vector<std::string> missing_;
};

class FileNotFound : public InputError {
public:
    explicit FileNotFound(const std::string& path) : InputError("cannot open " + path) {}
};

// Embedding store format errors.
class StoreFormatError : public InputError {
public:
    using InputError::InputError;
};
class BadMagic : public StoreFormatError {
public:
    BadMagic() : StoreFormatError("bad store magic (expected PHEM)") {}
};
class UnsupportedVersion : public StoreFormatError {
public:
    explicit UnsupportedVersion(unsigned v)
        : StoreFormatError("unsupported store version " + std::to_string(v)) {}
};
class TruncatedFile : public StoreFormatError {
public:
    TruncatedFile() : StoreFormatError("store file is truncated") {}
};
class DuplicateText : public StoreFormatError {
public:
    explicit DuplicateText(const std::string& text)
        : StoreFormatError("duplicate text in store: " + text) {}
};

class TextNotFound : public InputError {
public:
    explicit TextNotFound(const std::string& text)
        : InputError("text not found in store: " + text), text_(text) {}
    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
};

class UnknownText : public InputError {
public:
    explicit UnknownText(const std::string& text)
        : InputError("no class assignment for text: " + text) {}
};

class ProviderUnavailable : public ProviderError {
public:
    using ProviderError::ProviderError;
};

class KTooLarge : public InputError {
public:
    KTooLarge(std::size_t k, std::size_t n)
        : InputError("k=" + std::to_string(k) + " exceeds number of points " + std::to_string(n)) {}
};

class EmptyMatrix : public InputError {
public:
    EmptyMatrix() : InputError("assignment matrix is empty") {}
};

class MissingSeedEmbedding : public InputError {
public:
    explicit MissingSeedEmbedding(const std::string& seed)
        : InputError("no embedding for seed: " + seed) {}
};

class EmptyQuerySet : public InputError {
public:
    EmptyQuerySet() : InputError("MAP over an empty query set") {}
};

}  // namespace phrasekit

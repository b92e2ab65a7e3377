#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace henonlab {

/// Base of all recoverable domain failures.  `name()` is the stable
/// machine-readable identifier the CLI prints and scripts match on;
/// `what()` carries the human-readable message plus any context that
/// was attached while the error propagated.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string name, std::string message)
        : std::runtime_error(message), name_(std::move(name)), text_(std::move(message)) {}

    const char* what() const noexcept override { return text_.c_str(); }

    const std::string& name() const noexcept { return name_; }

    /// Append context (step index, scenario label, ...) while rethrowing.
    void add_context(const std::string& context) { text_ += "; " + context; }

private:
    std::string name_;
    std::string text_;
};

struct NonFinite : DomainError {
    explicit NonFinite(std::string msg) : DomainError("NonFinite", std::move(msg)) {}
};

struct NonPositiveWidth : DomainError {
    explicit NonPositiveWidth(std::string msg) : DomainError("NonPositiveWidth", std::move(msg)) {}
};

struct InvalidPlan : DomainError {
    explicit InvalidPlan(std::string msg) : DomainError("InvalidPlan", std::move(msg)) {}
};

struct OutOfBracket : DomainError {
    explicit OutOfBracket(std::string msg) : DomainError("OutOfBracket", std::move(msg)) {}
};

struct ZeroReferenceEnergy : DomainError {
    explicit ZeroReferenceEnergy(std::string msg) : DomainError("ZeroReferenceEnergy", std::move(msg)) {}
};

struct EmptyData : DomainError {
    explicit EmptyData(std::string msg) : DomainError("EmptyData", std::move(msg)) {}
};

struct RefinementFailure : DomainError {
    explicit RefinementFailure(std::string msg) : DomainError("RefinementFailure", std::move(msg)) {}
};

struct InvalidBranch : DomainError {
    explicit InvalidBranch(std::string msg) : DomainError("InvalidBranch", std::move(msg)) {}
};

struct NegativeDiscriminant : DomainError {
    explicit NegativeDiscriminant(std::string msg) : DomainError("NegativeDiscriminant", std::move(msg)) {}
};

struct DegenerateOffset : DomainError {
    explicit DegenerateOffset(std::string msg) : DomainError("DegenerateOffset", std::move(msg)) {}
};

struct SeparationUnderflow : DomainError {
    explicit SeparationUnderflow(std::string msg) : DomainError("SeparationUnderflow", std::move(msg)) {}
};

struct MissingColumn : DomainError {
    explicit MissingColumn(std::string msg) : DomainError("MissingColumn", std::move(msg)) {}
};

struct MalformedCsv : DomainError {
    explicit MalformedCsv(std::string msg) : DomainError("MalformedCsv", std::move(msg)) {}
};

struct HbarPolicyViolation : DomainError {
    explicit HbarPolicyViolation(std::string msg) : DomainError("HbarPolicyViolation", std::move(msg)) {}
};

} // namespace henonlab

#pragma once

#include <stdexcept>
#include <string>

namespace gcf {

// Error families, one per process exit code of the CLI.
enum class ErrorClass : int {
    other = 1,
    config = 2,
    convexity = 3,
    domain = 4,
    stall = 5,
};

class FlowError : public std::runtime_error {
public:
    FlowError(ErrorClass cls, const std::string& what)
        : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }
    int exit_code() const { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

#define GCF_DEFINE_ERROR(Name, Class)                                         \
    class Name : public FlowError {                                           \
    public:                                                                   \
        explicit Name(const std::string& what)                                \
            : FlowError(ErrorClass::Class, std::string(#Name ": ") + what) {} \
    }

GCF_DEFINE_ERROR(ConfigError, config);
GCF_DEFINE_ERROR(ConvexityLost, convexity);
GCF_DEFINE_ERROR(NonFinite, other);
GCF_DEFINE_ERROR(OutOfDomain, domain);
GCF_DEFINE_ERROR(PsiBoundViolated, domain);
GCF_DEFINE_ERROR(NotStarShaped, domain);
GCF_DEFINE_ERROR(PointNotInterior, domain);
GCF_DEFINE_ERROR(StalledFlow, stall);
GCF_DEFINE_ERROR(NoConvergence, other);
GCF_DEFINE_ERROR(InsufficientData, other);

#undef GCF_DEFINE_ERROR

}  // namespace gcf

#ifndef VPSPEC_ERRORS_HPP
#define VPSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vpspec {

struct DivergentMoment : std::runtime_error {
    explicit DivergentMoment(const std::string& what) : std::runtime_error(what) {}
};
struct InfiniteSupport : std::runtime_error {
    explicit InfiniteSupport(const std::string& what) : std::runtime_error(what) {}
};
struct PoleOutsideDomain : std::runtime_error {
    explicit PoleOutsideDomain(const std::string& what) : std::runtime_error(what) {}
};
struct ContinuationUnavailable : std::runtime_error {
    explicit ContinuationUnavailable(const std::string& what) : std::runtime_error(what) {}
};
struct OutOfRange : std::runtime_error {
    explicit OutOfRange(const std::string& what) : std::runtime_error(what) {}
};
struct NewtonDiverged : std::runtime_error {
    explicit NewtonDiverged(const std::string& what) : std::runtime_error(what) {}
};
struct DegenerateRoot : std::runtime_error {
    explicit DegenerateRoot(const std::string& what) : std::runtime_error(what) {}
};
struct ContourTooCoarse : std::runtime_error {
    explicit ContourTooCoarse(const std::string& what) : std::runtime_error(what) {}
};
struct QuadratureStall : std::runtime_error {
    explicit QuadratureStall(const std::string& what) : std::runtime_error(what) {}
};
struct WindowTooShort : std::runtime_error {
    explicit WindowTooShort(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vpspec

#endif

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtunnel {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using dvec = std::vector<double>;

inline constexpr const char* kToolName = "qtunnel";
inline constexpr const char* kToolVersion = "0.1.0";

/// Half-open site interval [begin, end) on the lattice.
struct Region {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end > begin ? end - begin : 0; }
    bool empty() const { return end <= begin; }
};

/// Raised when a simulation becomes physically invalid (probability
/// reaching the hard walls). Distinct from usage errors so the CLI can
/// map it to its own exit code.
class PhysicsError : public std::runtime_error {
  public:
    explicit PhysicsError(const std::string& what) : std::runtime_error(what) {}
};

class BoundaryContaminationError : public PhysicsError {
  public:
    explicit BoundaryContaminationError(const std::string& what) : PhysicsError(what) {}
};

/// Raised by observable extractors when no packet is present in the
/// queried region (e.g. nothing transmitted yet).
class NoPacketError : public PhysicsError {
  public:
    explicit NoPacketError(const std::string& what) : PhysicsError(what) {}
};

} // namespace qtunnel

#ifndef KGRAPH_ERRORS_HPP
#define KGRAPH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kgraph {

/// Base class for every engine error. `code()` is a stable identifier that the
/// command-line front end prints and that callers may switch on.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define KGRAPH_DEFINE_ERROR(Name, Code)                                   \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& message) : Error(Code, message) {}   \
  }

// Graph parsing and validation.
KGRAPH_DEFINE_ERROR(SchemaError, "SCHEMA");
KGRAPH_DEFINE_ERROR(CommutationError, "COMMUTATION");
KGRAPH_DEFINE_ERROR(SquareBijectionError, "SQUARE_BIJECTION");
KGRAPH_DEFINE_ERROR(HexagonError, "HEXAGON");

// Path algebra.
KGRAPH_DEFINE_ERROR(ComposabilityError, "COMPOSABILITY");
KGRAPH_DEFINE_ERROR(MatricesOnlyError, "MATRICES_ONLY");
KGRAPH_DEFINE_ERROR(RangeError, "RANGE");
KGRAPH_DEFINE_ERROR(EmptyColorSetError, "EMPTY_COLOR_SET");

// Numerics.
KGRAPH_DEFINE_ERROR(DimensionError, "DIMENSION");
KGRAPH_DEFINE_ERROR(NotSubinvariantError, "NOT_SUBINVARIANT");
KGRAPH_DEFINE_ERROR(ConvergenceError, "CONVERGENCE");
KGRAPH_DEFINE_ERROR(SpectralRadiusError, "SPECTRAL_RADIUS");

// Classification.
KGRAPH_DEFINE_ERROR(NotAClassError, "NOT_A_CLASS");
KGRAPH_DEFINE_ERROR(CertificationError, "CERTIFICATION");
KGRAPH_DEFINE_ERROR(DegenerateKernelError, "DEGENERATE_KERNEL");
KGRAPH_DEFINE_ERROR(NegativeMassError, "NEGATIVE_MASS");
KGRAPH_DEFINE_ERROR(ResidualError, "RESIDUAL");

// Oracle.
KGRAPH_DEFINE_ERROR(SupportError, "SUPPORT");
KGRAPH_DEFINE_ERROR(GenerationError, "GENERATION");

#undef KGRAPH_DEFINE_ERROR

}  // namespace kgraph

#endif  // KGRAPH_ERRORS_HPP

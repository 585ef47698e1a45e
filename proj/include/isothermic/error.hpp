#pragma once

#include <stdexcept>
#include <string>

namespace isothermic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ISOTHERMIC_ERROR(Name)                                  \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

ISOTHERMIC_ERROR(DimensionMismatch);
ISOTHERMIC_ERROR(DomainError);
ISOTHERMIC_ERROR(NonDegeneracyFailure);
ISOTHERMIC_ERROR(ProjectionSingular);
ISOTHERMIC_ERROR(NoIntersection);
ISOTHERMIC_ERROR(RankDeficiency);
ISOTHERMIC_ERROR(CompatibilityFailure);
ISOTHERMIC_ERROR(NullCongruence);
ISOTHERMIC_ERROR(DegenerateTransform);
ISOTHERMIC_ERROR(IntegratorAccuracy);
ISOTHERMIC_ERROR(FrenetDegeneracy);
ISOTHERMIC_ERROR(ClusteringAmbiguity);
ISOTHERMIC_ERROR(ConfigError);
ISOTHERMIC_ERROR(ArtifactError);

#undef ISOTHERMIC_ERROR

}  // namespace isothermic

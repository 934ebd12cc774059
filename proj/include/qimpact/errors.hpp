#ifndef QIMPACT_ERRORS_HPP
#define QIMPACT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qimpact {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define QIMPACT_DEFINE_ERROR(Name)                            \
  struct Name : Error {                                       \
    explicit Name(const std::string& msg) : Error(msg) {}     \
  }

QIMPACT_DEFINE_ERROR(InvalidGrid);
QIMPACT_DEFINE_ERROR(PacketClipped);
QIMPACT_DEFINE_ERROR(WrongVariant);
QIMPACT_DEFINE_ERROR(ResonantForcing);
QIMPACT_DEFINE_ERROR(TooManyStates);
QIMPACT_DEFINE_ERROR(NoConvergence);
QIMPACT_DEFINE_ERROR(NormDrift);
QIMPACT_DEFINE_ERROR(KrylovStall);
QIMPACT_DEFINE_ERROR(BasisTruncation);
QIMPACT_DEFINE_ERROR(TooShort);
QIMPACT_DEFINE_ERROR(TooFewPeaks);
QIMPACT_DEFINE_ERROR(TooFewSamples);
QIMPACT_DEFINE_ERROR(DegenerateEmbedding);
QIMPACT_DEFINE_ERROR(NonPositiveData);
QIMPACT_DEFINE_ERROR(IndexOutOfBasis);
QIMPACT_DEFINE_ERROR(ThermalTailUncaptured);
QIMPACT_DEFINE_ERROR(StepTooLarge);
QIMPACT_DEFINE_ERROR(MomentBlowup);
QIMPACT_DEFINE_ERROR(TooFewCrossings);
QIMPACT_DEFINE_ERROR(StuckAtWall);
QIMPACT_DEFINE_ERROR(ConfigInvalid);
QIMPACT_DEFINE_ERROR(UnknownPreset);

#undef QIMPACT_DEFINE_ERROR

}  // namespace qimpact

#endif

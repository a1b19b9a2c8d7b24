#include "linekit/selfcheck.hpp"

namespace linekit {

// Generated once from the nested-loop reference kernels in the test suite
// (same seeds and fill order), then frozen. Regenerate only when the fill
// conventions change, never to paper over a kernel regression.
const double kGamGoldenChecksum = -4.532613922799718;
const double kSppcspcGoldenChecksum = -6.7016513693584372;
const double kSppcspcGoldenWeightsChecksum = -1.0736723703875264;

}  // namespace linekit

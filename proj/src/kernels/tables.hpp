#pragma once

#include "embq/kernels.hpp"

namespace embq::kernels {

#if defined(EMBQ_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

#if defined(EMBQ_HAVE_NEON)
const KernelTable& neon_table();
#endif

}  // namespace embq::kernels

// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_KERNELS_TABLES_HPP
#define KEP_KERNELS_TABLES_HPP

#include "kep/kernels.hpp"

namespace kep::kernels::detail
{

extern const KernelTable scalar_table;
#if defined(KEP_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(KEP_HAVE_NEON)
extern const KernelTable neon_table;
#endif

}  // namespace kep::kernels::detail

#endif  // KEP_KERNELS_TABLES_HPP

#include <cstdio>
#include <cstdlib>
#include <string_view>

#include "embq/kernels.hpp"
#include "tables.hpp"

namespace embq::kernels {
namespace {

#if defined(EMBQ_HAVE_AVX2)
bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable& select() {
  const auto tables = available_tables();
  const char* forced = std::getenv("EMBQ_KERNELS");
  if (forced != nullptr && *forced != '\0') {
    for (const KernelTable* t : tables) {
      if (t->name == std::string_view(forced)) return *t;
    }
    std::fprintf(stderr, "embq: EMBQ_KERNELS=%s not available on this CPU, using %.*s\n",
                 forced, static_cast<int>(tables.back()->name.size()),
                 tables.back()->name.data());
  }
  return *tables.back();
}

}  // namespace

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> out{&scalar_table()};
#if defined(EMBQ_HAVE_AVX2)
  if (cpu_has_avx2()) out.push_back(&avx2_table());
#endif
#if defined(EMBQ_HAVE_NEON)
  out.push_back(&neon_table());
#endif
  return out;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace embq::kernels

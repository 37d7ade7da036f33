#include "dtsnn/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace dtsnn::kernels {
namespace {

const KernelSet* widest() {
    const auto all = available();
    const KernelSet* best = all.back();
    if (const char* env = std::getenv("DTSNN_KERNELS")) {
        for (const KernelSet* k : all)
            if (k->name == env) return k;
    }
    return best;
}

std::atomic<const KernelSet*>& current() {
    static std::atomic<const KernelSet*> k{widest()};
    return k;
}

} // namespace

std::vector<const KernelSet*> available() {
    std::vector<const KernelSet*> out{&scalar()};
#if defined(DTSNN_HAVE_X86_KERNELS)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2")) out.push_back(&avx2());
    if (__builtin_cpu_supports("avx512f")) out.push_back(&avx512());
#endif
    return out;
}

const KernelSet& active() { return *current().load(std::memory_order_relaxed); }

void select(std::string_view name) {
    for (const KernelSet* k : available()) {
        if (k->name == name) {
            current().store(k, std::memory_order_relaxed);
            return;
        }
    }
    throw std::invalid_argument("kernel variant '" + std::string(name) + "' not available");
}

} // namespace dtsnn::kernels

#pragma once

#include <cstdint>
#include <cstring>
#include <string>

namespace ars {

// FNV-1a, used for file digests and determinism checks.
class Fnv1a {
  public:
    void update(const void* data, size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            h_ ^= p[i];
            h_ *= 0x100000001b3ull;
        }
    }

    template <typename T>
    void update_value(const T& v) {
        static_assert(std::is_trivially_copyable_v<T>);
        update(&v, sizeof(T));
    }

    void update_string(const std::string& s) { update(s.data(), s.size()); }

    uint64_t digest() const { return h_; }

  private:
    uint64_t h_ = 0xcbf29ce484222325ull;
};

inline uint64_t fnv1a(const void* data, size_t n) {
    Fnv1a h;
    h.update(data, n);
    return h.digest();
}

}  // namespace ars

#include "iep/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace iep {

std::size_t default_threads() {
  std::size_t threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (const char* cap = std::getenv("IEP_THREADS")) {
    std::string_view text(cap);
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && end == text.data() + text.size() && value > 0 && value < threads) {
      threads = value;
    }
  }
  return threads;
}

}  // namespace iep

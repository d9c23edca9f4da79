#ifndef HERIT_RIDGE_VERSION_HPP
#define HERIT_RIDGE_VERSION_HPP

namespace heritridge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace heritridge

#endif  // HERIT_RIDGE_VERSION_HPP

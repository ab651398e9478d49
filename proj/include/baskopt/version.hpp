#ifndef BASKOPT_VERSION_HPP
#define BASKOPT_VERSION_HPP

namespace baskopt {

inline constexpr const char* version_string = "0.1.0";

} // namespace baskopt

#endif

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace gdsq {

// Thrown for every precondition / construction / configuration violation.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
template <class... Parts>
std::string cat(Parts&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    return os.str();
}
}  // namespace detail

template <class... Parts>
[[noreturn]] void fail(Parts&&... parts) {
    throw Error(detail::cat(std::forward<Parts>(parts)...));
}

}  // namespace gdsq

#ifndef SAFESYNTH_ERRORS_HPP_
#define SAFESYNTH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace safesynth {

// Lexical or grammatical error in a formula or partition file.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int col)
        : std::runtime_error(what + " (line " + std::to_string(line) +
                             ", column " + std::to_string(col) + ")"),
          line_(line), col_(col) {}

    int line() const { return line_; }
    int column() const { return col_; }

private:
    int line_;
    int col_;
};

// Input formula falls outside the supported syntactic fragment.
class FragmentError : public std::runtime_error {
public:
    explicit FragmentError(const std::string& what)
        : std::runtime_error(what) {}
};

// A configured cap (state count, variable count, deadline) was exceeded.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace safesynth

#endif  // SAFESYNTH_ERRORS_HPP_

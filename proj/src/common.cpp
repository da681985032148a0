#include "tal/common.hpp"

#include <sstream>

namespace tal {

namespace {

std::string degenerate_message(ElemIndex elem, double volume)
{
    std::ostringstream os;
    os << "degenerate element " << elem << " (volume " << volume << ")";
    return os.str();
}

std::string parse_message(const std::string& source, std::size_t line, const std::string& what)
{
    std::ostringstream os;
    os << source << ":" << line << ": " << what;
    return os.str();
}

} // namespace

DegenerateElementError::DegenerateElementError(ElemIndex elem, double volume)
    : std::runtime_error(degenerate_message(elem, volume)), elem_(elem), volume_(volume)
{
}

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(parse_message(source, line, what)), line_(line)
{
}

} // namespace tal

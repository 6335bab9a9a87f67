#pragma once

#include <iosfwd>
#include <string>

#include "diqkd/protocol.hpp"

namespace diqkd::protocol {

/// One record per line, fields in fixed order:
///   index mode u v s t a b y y' f g
/// with "-" for fields the round does not carry. mode is CHSH or QKD,
/// bases are X or Z, f is pass or fail, and g is two bits (bit flip then
/// phase flip). Lines starting with '#' are comments.
std::string to_line(const RoundRecord& rec);
RoundRecord parse_line(const std::string& line);

void write_transcript(const Transcript& transcript, std::ostream& out);
Transcript read_transcript(std::istream& in);

}  // namespace diqkd::protocol

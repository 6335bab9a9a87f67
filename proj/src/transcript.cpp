#include "diqkd/transcript.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace diqkd::protocol {

namespace {

std::string bit_field(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "-";
}

std::string basis_field(const std::optional<Basis>& v) {
  if (!v) return "-";
  return *v == Basis::X ? "X" : "Z";
}

int parse_bit(const std::string& tok, const char* what) {
  if (tok == "0") return 0;
  if (tok == "1") return 1;
  throw std::invalid_argument(std::string("transcript: bad ") + what + " field '" + tok + "'");
}

}  // namespace

std::string to_line(const RoundRecord& rec) {
  std::ostringstream os;
  os << rec.index << ' ' << (rec.mode == Mode::Chsh ? "CHSH" : "QKD");
  os << ' ' << bit_field(rec.u) << ' ' << bit_field(rec.v) << ' ' << bit_field(rec.s)
     << ' ' << bit_field(rec.t);
  os << ' ' << basis_field(rec.a) << ' ' << basis_field(rec.b);
  os << ' ' << bit_field(rec.y) << ' ' << bit_field(rec.y_prime);
  if (rec.f)
    os << ' ' << (*rec.f ? "pass" : "fail");
  else
    os << " -";
  if (rec.g)
    os << ' ' << (rec.g->bit_flip ? '1' : '0') << (rec.g->phase_flip ? '1' : '0');
  else
    os << " -";
  return os.str();
}

RoundRecord parse_line(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> tok;
  std::string t;
  while (is >> t) tok.push_back(t);
  if (tok.size() != 12)
    throw std::invalid_argument("transcript: expected 12 fields, got " +
                                std::to_string(tok.size()));
  RoundRecord rec;
  rec.index = std::stoll(tok[0]);
  if (tok[1] == "CHSH")
    rec.mode = Mode::Chsh;
  else if (tok[1] == "QKD")
    rec.mode = Mode::Qkd;
  else
    throw std::invalid_argument("transcript: bad mode '" + tok[1] + "'");

  const auto opt_bit = [](const std::string& s, const char* what) -> std::optional<int> {
    if (s == "-") return std::nullopt;
    return parse_bit(s, what);
  };
  rec.u = opt_bit(tok[2], "u");
  rec.v = opt_bit(tok[3], "v");
  rec.s = opt_bit(tok[4], "s");
  rec.t = opt_bit(tok[5], "t");

  const auto opt_basis = [](const std::string& s) -> std::optional<Basis> {
    if (s == "-") return std::nullopt;
    if (s == "X") return Basis::X;
    if (s == "Z") return Basis::Z;
    throw std::invalid_argument("transcript: bad basis '" + s + "'");
  };
  rec.a = opt_basis(tok[6]);
  rec.b = opt_basis(tok[7]);
  rec.y = opt_bit(tok[8], "y");
  rec.y_prime = opt_bit(tok[9], "y'");

  if (tok[10] == "-")
    rec.f = std::nullopt;
  else if (tok[10] == "pass")
    rec.f = true;
  else if (tok[10] == "fail")
    rec.f = false;
  else
    throw std::invalid_argument("transcript: bad herald field '" + tok[10] + "'");

  if (tok[11] == "-") {
    rec.g = std::nullopt;
  } else {
    if (tok[11].size() != 2)
      throw std::invalid_argument("transcript: bad bell outcome '" + tok[11] + "'");
    BellOutcome g;
    g.bit_flip = parse_bit(tok[11].substr(0, 1), "g") == 1;
    g.phase_flip = parse_bit(tok[11].substr(1, 1), "g") == 1;
    rec.g = g;
  }
  return rec;
}

void write_transcript(const Transcript& transcript, std::ostream& out) {
  out << "# index mode u v s t a b y y' f g\n";
  for (const RoundRecord& rec : transcript.rounds) out << to_line(rec) << '\n';
}

Transcript read_transcript(std::istream& in) {
  Transcript transcript;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    transcript.rounds.push_back(parse_line(line));
  }
  return transcript;
}

}  // namespace diqkd::protocol

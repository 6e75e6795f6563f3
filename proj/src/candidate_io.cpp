#include <fstream>
#include <sstream>

#include "moran/errors.hpp"
#include "moran/spectra.hpp"

namespace moran {

CandidateSet parse_candidate_set(std::string_view text) {
  std::vector<Rational> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char &c : line)
      if (c == ',') c = ' ';
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) {
      try {
        out.push_back(Rational::parse(token));
      } catch (const InputError &e) {
        throw InputError("line " + std::to_string(number) + ": " + e.what());
      }
    }
  }
  return CandidateSet(std::move(out));
}

CandidateSet load_candidate_set(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_candidate_set(buf.str());
}

std::string format_candidate_set(const CandidateSet &set) {
  std::string out;
  for (const auto &x : set) {
    out += x.str();
    out += '\n';
  }
  return out;
}

} // namespace moran

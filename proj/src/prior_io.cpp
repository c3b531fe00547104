#include "skirental/prior_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace skirental {
namespace {

[[noreturn]] void syntax_error(std::string_view text, std::size_t pos, std::string_view what) {
  throw Error(ErrorCode::kInvalidSpec,
              fmt::format("{} at offset {} in '{}'", what, pos, text));
}

class SpecParser {
 public:
  SpecParser(std::string_view text, Day horizon) : text_(text), horizon_(horizon) {}

  Family parse() {
    Family family = family_expr();
    skip_space();
    if (pos_ != text_.size()) syntax_error(text_, pos_, "trailing characters");
    return family;
  }

 private:
  Family family_expr() {
    const std::string name = identifier();
    expect('(');
    Family out;
    if (name == "uniform") {
      out = UniformFamily{optional_day_before_close()};
    } else if (name == "geometric") {
      const double p = number();
      out = GeometricFamily{p, optional_trailing_day()};
    } else if (name == "gaussian") {
      const double mu = number();
      expect(',');
      const double sigma = number();
      out = GaussianFamily{mu, sigma, optional_trailing_day()};
    } else if (name == "point") {
      out = PointMassFamily{day()};
    } else if (name == "explicit") {
      ExplicitFamily list;
      do {
        const Day k = day();
        expect(':');
        list.weights.push_back({k, number()});
      } while (accept(','));
      out = std::move(list);
    } else if (name == "mixture") {
      MixtureFamily mix;
      do {
        const double w = number();
        expect('*');
        mix.components.push_back({w, family_expr()});
      } while (accept(','));
      out = std::move(mix);
    } else {
      syntax_error(text_, pos_, fmt::format("unknown family '{}'", name));
    }
    expect(')');
    return out;
  }

  Day optional_day_before_close() {
    skip_space();
    if (peek() == ')') return horizon_;
    return day();
  }

  Day optional_trailing_day() { return accept(',') ? day() : horizon_; }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) syntax_error(text_, pos_, "expected a family name");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_space();
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const auto [end, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
    if (ec != std::errc()) syntax_error(text_, pos_, "expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return value;
  }

  Day day() {
    const double value = number();
    if (value != static_cast<double>(static_cast<Day>(value))) {
      syntax_error(text_, pos_, "expected an integer day");
    }
    return static_cast<Day>(value);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool accept(char c) {
    skip_space();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) syntax_error(text_, pos_, fmt::format("expected '{}'", c));
  }

  std::string_view text_;
  Day horizon_;
  std::size_t pos_ = 0;
};

struct FamilyFormatter {
  std::string operator()(const UniformFamily& f) const { return fmt::format("uniform({})", f.n); }
  std::string operator()(const GeometricFamily& f) const {
    return fmt::format("geometric({},{})", f.p, f.n);
  }
  std::string operator()(const GaussianFamily& f) const {
    return fmt::format("gaussian({},{},{})", f.mu, f.sigma, f.n);
  }
  std::string operator()(const PointMassFamily& f) const { return fmt::format("point({})", f.k); }
  std::string operator()(const ExplicitFamily& f) const {
    std::string out = "explicit(";
    for (std::size_t i = 0; i < f.weights.size(); ++i) {
      out += fmt::format("{}{}:{}", i ? "," : "", f.weights[i].day, f.weights[i].mass);
    }
    return out + ")";
  }
  std::string operator()(const MixtureFamily& f) const {
    std::string out = "mixture(";
    for (std::size_t i = 0; i < f.components.size(); ++i) {
      out += fmt::format("{}{}*{}", i ? "," : "", f.components[i].weight,
                         std::visit(*this, f.components[i].family));
    }
    return out + ")";
  }
};

double parse_double_field(std::string_view field, int line_no, const std::string& source) {
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) {
    field.remove_prefix(1);
  }
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) {
    field.remove_suffix(1);
  }
  double value = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size()) {
    throw Error(ErrorCode::kInvalidSpec,
                fmt::format("{}:{}: '{}' is not a number", source, line_no, field));
  }
  return value;
}

}  // namespace

PriorFamilySpec parse_family_spec(std::string_view text, Day horizon) {
  PriorFamilySpec spec{SpecParser(text, horizon).parse(), horizon};
  validate(spec);
  return spec;
}

std::string format_family(const Family& family) { return std::visit(FamilyFormatter{}, family); }

std::vector<std::pair<int, std::string>> data_lines(std::string_view text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.emplace_back(line_no, line.substr(first, last - first + 1));
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

DiscretePrior load_prior_file(const std::filesystem::path& path, std::optional<Day> horizon) {
  const std::string source = path.string();
  ExplicitFamily list;
  Day max_day = 0;
  for (const auto& [line_no, content] : data_lines(read_text_file(path))) {
    const auto comma = content.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kInvalidSpec,
                  fmt::format("{}:{}: expected 'k,weight'", source, line_no));
    }
    const double k = parse_double_field(std::string_view(content).substr(0, comma), line_no, source);
    const double w = parse_double_field(std::string_view(content).substr(comma + 1), line_no, source);
    if (k != static_cast<double>(static_cast<Day>(k)) || k < 1) {
      throw Error(ErrorCode::kInvalidSpec,
                  fmt::format("{}:{}: day {} is not a positive integer", source, line_no, k));
    }
    list.weights.push_back({static_cast<Day>(k), w});
    max_day = std::max(max_day, static_cast<Day>(k));
  }
  if (list.weights.empty()) {
    throw Error(ErrorCode::kZeroMass, fmt::format("{} lists no days", source));
  }
  return build_prior({std::move(list), horizon.value_or(max_day)});
}

void save_prior_file(const std::filesystem::path& path, const DiscretePrior& prior) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  out << fmt::format("# horizon {}\n", prior.horizon());
  for (const auto& point : prior.support()) {
    out << fmt::format("{},{:.17g}\n", point.day, point.mass);
  }
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write to {} failed", path.string()));
}

}  // namespace skirental

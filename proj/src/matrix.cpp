#include "pnormcut/matrix.hpp"

#include <cstdio>
#include <sstream>
#include <string>

namespace pnormcut {

Matrix to_real(const ExactMatrix& m) {
  return m.map([](const Rational& q) { return q.convert_to<double>(); });
}

ExactMatrix to_exact(const Matrix& m) {
  return m.map([](double v) { return Rational(v); });
}

std::vector<double> multiply(const Matrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) throw std::invalid_argument("multiply: dimension mismatch");
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

std::vector<double> multiply_transpose(const Matrix& m, std::span<const double> y) {
  if (y.size() != m.rows()) throw std::invalid_argument("multiply_transpose: dimension mismatch");
  std::vector<double> x(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    const double yi = y[i];
    if (yi == 0.0) continue;
    for (std::size_t j = 0; j < r.size(); ++j) x[j] += r[j] * yi;
  }
  return x;
}

std::string format_decimal(const Rational& q) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();

  unsigned twos = 0;
  unsigned fives = 0;
  BigInt rest = den;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  if (rest != 1) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", q.convert_to<double>());
    return buf;
  }

  // q = num * 10^k / den with the division exact.
  const unsigned k = std::max(twos, fives);
  BigInt scale = 1;
  for (unsigned i = 0; i < k; ++i) scale *= 10;
  const bool negative = num < 0;
  BigInt digits_value = (negative ? BigInt(-num) : num) * scale / den;
  std::string digits = digits_value.str();
  if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
  digits.insert(digits.size() - k, ".");
  return negative ? "-" + digits : digits;
}

void write_matrix(std::ostream& os, const ExactMatrix& m, MatrixFormat format) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ' ';
      os << (format == MatrixFormat::kRational ? to_string(m(i, j)) : format_decimal(m(i, j)));
    }
    os << '\n';
  }
}

ExactMatrix read_matrix(std::istream& is) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(is, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  if (tokens.size() < 2) throw std::invalid_argument("matrix file: missing 'rows cols' header");
  std::size_t rows = 0;
  std::size_t cols = 0;
  try {
    rows = std::stoul(tokens[0]);
    cols = std::stoul(tokens[1]);
  } catch (const std::exception&) {
    throw std::invalid_argument("matrix file: malformed header");
  }
  if (tokens.size() - 2 != rows * cols) {
    throw std::invalid_argument("matrix file: expected " + std::to_string(rows * cols) + " entries, found " +
                                std::to_string(tokens.size() - 2));
  }
  std::vector<Rational> data;
  data.reserve(rows * cols);
  for (std::size_t k = 2; k < tokens.size(); ++k) data.push_back(parse_rational(tokens[k]));
  return ExactMatrix(rows, cols, std::move(data));
}

}  // namespace pnormcut

#include "reshuffle/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <sstream>

namespace reshuffle {

namespace {

// Splits a line into whitespace-separated tokens, keeping 1-based token
// positions for error reports (the label is token 0, features 1, 2, ...).
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_real(std::string_view tok, int line, int col) {
  double v = 0.0;
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);  // "+1" labels
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ParseError(line, col, "unparseable real '" + std::string(tok) + "'");
  return v;
}

int parse_index(std::string_view tok, int line, int col) {
  int v = 0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || v < 1)
    throw ParseError(line, col,
                     "malformed feature index '" + std::string(tok) + "'");
  return v;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::optional<int> dim_override) {
  Dataset ds;
  int max_index = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    const double raw = parse_real(tokens[0], line_no, 0);
    double label;
    if (raw == -1.0 || raw == 0.0)
      label = 0.0;
    else if (raw == 1.0)
      label = 1.0;
    else
      throw ParseError(line_no, 0,
                       "label must be one of {-1, 0, 1}, got '" +
                           std::string(tokens[0]) + "'");

    SparseRow row;
    int prev_index = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const int col = static_cast<int>(t);
      const std::string_view tok = tokens[t];
      const std::size_t sep = tok.find(':');
      if (sep == std::string_view::npos || sep == 0 || sep + 1 == tok.size())
        throw ParseError(line_no, col,
                         "malformed token '" + std::string(tok) +
                             "', expected <idx>:<val>");
      const int index = parse_index(tok.substr(0, sep), line_no, col);
      if (index <= prev_index)
        throw ParseError(line_no, col,
                         "non-increasing index " + std::to_string(index));
      prev_index = index;
      const double value = parse_real(tok.substr(sep + 1), line_no, col);
      row.idx.push_back(index - 1);
      row.val.push_back(value);
      max_index = std::max(max_index, index);
    }
    ds.features.row.push_back(std::move(row));
    ds.labels.push_back(label);
  }
  ds.features.rows = static_cast<int>(ds.features.row.size());
  ds.features.cols = max_index;
  if (dim_override) {
    if (*dim_override < max_index)
      throw std::invalid_argument(
          "dim override " + std::to_string(*dim_override) +
          " is smaller than the largest feature index " +
          std::to_string(max_index));
    ds.features.cols = *dim_override;
  }
  return ds;
}

Dataset parse_libsvm(const std::string& text, std::optional<int> dim_override) {
  std::istringstream in(text);
  return parse_libsvm(in, dim_override);
}

std::string serialize_libsvm(const Dataset& ds) {
  std::string out;
  char buf[40];
  for (int i = 0; i < ds.N(); ++i) {
    out += ds.labels[i] == 1.0 ? '1' : '0';
    const SparseRow& r = ds.features.row[i];
    for (std::size_t k = 0; k < r.idx.size(); ++k) {
      std::snprintf(buf, sizeof(buf), " %d:%.17g", r.idx[k] + 1, r.val[k]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

MinibatchPartition group_minibatches(int N, int tau,
                                     std::span<const int> ordering) {
  if (tau < 1 || tau > N)
    throw std::invalid_argument("need 1 <= tau <= N, got tau = " +
                                std::to_string(tau) + ", N = " +
                                std::to_string(N));
  if (static_cast<int>(ordering.size()) != N)
    throw std::invalid_argument("ordering length does not match N");
  MinibatchPartition part;
  part.tau = tau;
  const int n = (N + tau - 1) / tau;
  part.groups.reserve(n);
  for (int g = 0; g < n; ++g) {
    const int lo = g * tau;
    const int hi = (g == n - 1) ? N : lo + tau;
    part.groups.emplace_back(ordering.begin() + lo, ordering.begin() + hi);
  }
  return part;
}

MinibatchPartition group_minibatches(int N, int tau) {
  std::vector<int> identity(N);
  std::iota(identity.begin(), identity.end(), 0);
  return group_minibatches(N, tau, identity);
}

double batch_smoothness(double L_f, double L_max, int n_samples, int tau) {
  if (n_samples < 2) throw std::invalid_argument("need n_samples >= 2");
  if (tau < 1 || tau > n_samples)
    throw std::invalid_argument("need 1 <= tau <= n_samples");
  const double n = n_samples;
  return n * (tau - 1) / (tau * (n - 1)) * L_f +
         (n - tau) / (tau * (n - 1)) * L_max;
}

double default_regularizer(double L, int N) {
  if (!(L > 0.0) || N < 1)
    throw std::invalid_argument("need L > 0 and N >= 1");
  return L / std::sqrt(static_cast<double>(N));
}

}  // namespace reshuffle

#include "dcm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "dcm/error.hpp"

namespace dcm {

int DataSet::domain_count() const {
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

std::vector<Index> DataSet::domain_sizes() const {
  std::vector<Index> sizes(static_cast<std::size_t>(domain_count()), 0);
  for (int label : d) ++sizes[static_cast<std::size_t>(label - 1)];
  return sizes;
}

std::set<int> DataSet::domains() const { return {d.begin(), d.end()}; }

MatrixXd DataSet::domain_column() const {
  MatrixXd D(size(), 1);
  for (Index i = 0; i < size(); ++i) D(i, 0) = d[static_cast<std::size_t>(i)];
  return D;
}

void DataSet::validate() const {
  require(X.rows() >= 1, "dataset is empty");
  require(y.size() == X.rows(), "output count differs from row count");
  require(static_cast<Index>(d.size()) == X.rows(),
          "domain label count differs from row count");
  for (int label : d) {
    require(label >= 1, "domain labels must be >= 1, got " +
                            std::to_string(label));
  }
  require(X.allFinite() && y.allFinite(), "dataset contains non-finite values");
}

DataSet DataSet::subset(const std::vector<Index>& rows) const {
  DataSet out;
  out.X.resize(static_cast<Index>(rows.size()), X.cols());
  out.y.resize(static_cast<Index>(rows.size()));
  out.d.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Index i = rows[k];
    require(i >= 0 && i < size(), "row index out of range");
    out.X.row(static_cast<Index>(k)) = X.row(i);
    out.y(static_cast<Index>(k)) = y(i);
    out.d.push_back(d[static_cast<std::size_t>(i)]);
  }
  out.label_kind = label_kind;
  out.feature_names = feature_names;
  return out;
}

std::pair<DataSet, DataSet> split_domains(const DataSet& data,
                                          const std::set<int>& train_domains) {
  const std::set<int> observed = data.domains();
  require(!train_domains.empty(), "training domain set is empty");
  for (int t : train_domains) {
    if (!observed.count(t)) {
      fail(ErrorCode::InvalidInput,
           "unknown domain label " + std::to_string(t));
    }
  }
  require(train_domains.size() < observed.size(),
          "training domains must be a proper subset of the observed domains");
  std::vector<Index> train, test;
  for (Index i = 0; i < data.size(); ++i) {
    (train_domains.count(data.d[static_cast<std::size_t>(i)]) ? train : test)
        .push_back(i);
  }
  return {data.subset(train), data.subset(test)};
}

// ---------------------------------------------------------------- CSV

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

DataSet load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_line(line);
      break;
    }
  }
  if (header.empty()) {
    fail(ErrorCode::InvalidInput, path.string() + " is empty");
  }
  if (!header[0].empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    header[0] = header[0].substr(3);
  }

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
  auto column = [&](const std::string& name) {
    const auto it = index.find(name);
    if (it == index.end()) {
      fail(ErrorCode::SchemaError,
           path.string() + ": missing column '" + name + "'");
    }
    return it->second;
  };
  const std::size_t label_idx = column(schema.label_col);
  const std::size_t domain_idx = column(schema.domain_col);
  std::vector<std::size_t> feature_idx;
  std::vector<std::string> feature_names;
  if (schema.feature_cols.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i != label_idx && i != domain_idx) {
        feature_idx.push_back(i);
        feature_names.push_back(header[i]);
      }
    }
  } else {
    for (const auto& name : schema.feature_cols) {
      feature_idx.push_back(column(name));
      feature_names.push_back(name);
    }
  }
  if (feature_idx.empty()) {
    fail(ErrorCode::SchemaError, path.string() + ": no feature columns");
  }

  std::vector<std::vector<double>> rows;
  std::vector<double> ys;
  std::vector<int> ds;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      fail(ErrorCode::InvalidInput,
           path.string() + ": line " + std::to_string(line_no) + " has " +
               std::to_string(fields.size()) + " fields, expected " +
               std::to_string(header.size()));
    }
    auto number = [&](std::size_t col) {
      double v = 0.0;
      if (!parse_double(fields[col], v)) {
        fail(ErrorCode::InvalidInput,
             path.string() + ": line " + std::to_string(line_no) +
                 ", column '" + header[col] + "': cannot parse '" +
                 fields[col] + "' as a number");
      }
      return v;
    };
    std::vector<double> x;
    x.reserve(feature_idx.size());
    for (std::size_t col : feature_idx) x.push_back(number(col));
    const double label = number(label_idx);
    const double domain = number(domain_idx);
    if (domain != static_cast<double>(static_cast<int>(domain)) || domain < 1) {
      fail(ErrorCode::InvalidInput,
           path.string() + ": line " + std::to_string(line_no) +
               ": domain label must be a positive integer");
    }
    rows.push_back(std::move(x));
    ys.push_back(label);
    ds.push_back(static_cast<int>(domain));
  }
  if (rows.empty()) {
    fail(ErrorCode::InvalidInput, path.string() + " has no data rows");
  }

  DataSet data;
  data.X.resize(static_cast<Index>(rows.size()),
                static_cast<Index>(feature_idx.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < feature_idx.size(); ++j) {
      data.X(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  data.y = Eigen::Map<const VectorXd>(ys.data(), static_cast<Index>(ys.size()));
  data.d = std::move(ds);
  data.label_kind = schema.label_kind;
  data.feature_names = std::move(feature_names);
  data.validate();
  return data;
}

std::string to_csv(const DataSet& data) {
  std::ostringstream out;
  for (Index j = 0; j < data.dim(); ++j) {
    if (static_cast<std::size_t>(j) < data.feature_names.size()) {
      out << data.feature_names[static_cast<std::size_t>(j)];
    } else {
      out << "x" << (j + 1);
    }
    out << ',';
  }
  out << "y,d\n";
  for (Index i = 0; i < data.size(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) {
      out << format_double(data.X(i, j)) << ',';
    }
    out << format_double(data.y(i)) << ',' << data.d[static_cast<std::size_t>(i)]
        << '\n';
  }
  return out.str();
}

void write_csv(const std::filesystem::path& path, const DataSet& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << to_csv(data);
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace dcm

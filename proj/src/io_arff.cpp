#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "seedlab/io.hpp"

namespace seedlab::io {

namespace {

std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::optional<double> parse_double(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// ARFF names and nominal values are quoted when they would not survive
// whitespace/comma tokenization.
std::string arff_quote(const std::string& s) {
  const bool plain = !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '{' || c == '}' ||
           c == '\'' || c == '"' || c == '%' || c == '\\';
  });
  if (plain) return s;
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::MalformedArff, "line " + std::to_string(line) + ": " + what);
}

struct Token {
  enum Kind { Word, Quoted, Open, Close, Comma } kind;
  std::string text;
};

// Splits one ARFF line. An unquoted '%' starts a comment.
std::vector<Token> tokenize(std::string_view s, std::size_t line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '%') {
      break;
    } else if (c == '{') {
      out.push_back({Token::Open, "{"});
      ++i;
    } else if (c == '}') {
      out.push_back({Token::Close, "}"});
      ++i;
    } else if (c == ',') {
      out.push_back({Token::Comma, ","});
      ++i;
    } else if (c == '\'' || c == '"') {
      std::string text;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '\\' && i + 1 < s.size()) {
          text.push_back(s[i + 1]);
          i += 2;
        } else if (s[i] == c) {
          closed = true;
          ++i;
          break;
        } else {
          text.push_back(s[i++]);
        }
      }
      if (!closed) malformed(line, "unterminated quote");
      out.push_back({Token::Quoted, std::move(text)});
    } else {
      std::string text;
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != ',' &&
             s[i] != '{' && s[i] != '}' && s[i] != '%') {
        text.push_back(s[i++]);
      }
      out.push_back({Token::Word, std::move(text)});
    }
  }
  return out;
}

struct Attribute {
  std::string name;
  std::optional<std::vector<std::string>> nominal;
};

Attribute parse_attribute(const std::vector<Token>& t, std::size_t line) {
  if (t.size() < 3) malformed(line, "incomplete @attribute declaration");
  if (t[1].kind != Token::Word && t[1].kind != Token::Quoted) malformed(line, "bad attribute name");
  Attribute attr{t[1].text, std::nullopt};
  if (t[2].kind == Token::Open) {
    std::vector<std::string> values;
    std::size_t i = 3;
    bool expect_value = true;
    for (; i < t.size() && t[i].kind != Token::Close; ++i) {
      if (expect_value) {
        if (t[i].kind != Token::Word && t[i].kind != Token::Quoted) malformed(line, "bad nominal value");
        values.push_back(t[i].text);
      } else if (t[i].kind != Token::Comma) {
        malformed(line, "expected ',' between nominal values");
      }
      expect_value = !expect_value;
    }
    if (i == t.size()) malformed(line, "unterminated nominal value list");
    if (i + 1 != t.size()) malformed(line, "trailing tokens after nominal list");
    if (values.empty() || expect_value) malformed(line, "empty or dangling nominal value list");
    attr.nominal = std::move(values);
    return attr;
  }
  const std::string type = lower(t[2].text);
  if (t[2].kind != Token::Word || t.size() != 3) malformed(line, "bad attribute type");
  if (type != "numeric" && type != "real" && type != "integer") {
    malformed(line, "unsupported attribute type '" + t[2].text + "'");
  }
  return attr;
}

std::string_view trim_line(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string_view v = line;
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
  return v;
}

template <typename Fn>
void with_output_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  fn(out);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

void write_arff(const LabeledDataset& ds, std::ostream& out) {
  ds.validate();
  out << "@RELATION " << arff_quote(ds.relation) << "\n\n";
  for (const auto& name : ds.feature_names) out << "@ATTRIBUTE " << arff_quote(name) << " NUMERIC\n";
  out << "@ATTRIBUTE class {";
  for (std::size_t c = 0; c < ds.class_names.size(); ++c) {
    out << (c ? "," : "") << arff_quote(ds.class_names[c]);
  }
  out << "}\n\n@DATA\n";
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (const double v : ds.X.row(r)) out << format_double(v) << ',';
    out << arff_quote(ds.class_names[static_cast<std::size_t>(ds.y[r])]) << '\n';
  }
}

void write_arff(const LabeledDataset& ds, const std::filesystem::path& path) {
  with_output_file(path, [&](std::ostream& out) { write_arff(ds, out); });
}

LabeledDataset read_arff(std::istream& in) {
  LabeledDataset ds;
  std::vector<Attribute> attrs;
  bool seen_relation = false;
  bool in_data = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim_line(raw);
    if (text.empty() || text.front() == '%') continue;

    if (!in_data) {
      const auto t = tokenize(text, line);
      if (t.empty()) continue;
      const std::string key = lower(t[0].text);
      if (t[0].kind != Token::Word) malformed(line, "expected a declaration");
      if (key == "@relation") {
        if (t.size() != 2) malformed(line, "@relation takes one name");
        ds.relation = t[1].text;
        seen_relation = true;
      } else if (key == "@attribute") {
        if (!seen_relation) malformed(line, "@attribute before @relation");
        attrs.push_back(parse_attribute(t, line));
      } else if (key == "@data") {
        if (t.size() != 1) malformed(line, "unexpected tokens after @data");
        if (attrs.empty() || !attrs.back().nominal) {
          throw Error(ErrorKind::MissingClassAttribute,
                      "the last attribute must be a nominal class attribute");
        }
        for (std::size_t a = 0; a + 1 < attrs.size(); ++a) {
          if (attrs[a].nominal) malformed(line, "nominal attribute '" + attrs[a].name +
                                                    "' is only supported in last position");
          ds.feature_names.push_back(attrs[a].name);
        }
        ds.class_names = *attrs.back().nominal;
        ds.X = Matrix(0, ds.feature_names.size());
        in_data = true;
      } else {
        malformed(line, "unknown declaration '" + t[0].text + "'");
      }
      continue;
    }

    if (text.front() == '{') malformed(line, "sparse ARFF rows are not supported");
    const auto t = tokenize(text, line);
    std::vector<std::string> cells;
    bool expect_value = true;
    for (const auto& tok : t) {
      if (tok.kind == Token::Comma) {
        if (expect_value) malformed(line, "empty cell");
        expect_value = true;
      } else if (tok.kind == Token::Word || tok.kind == Token::Quoted) {
        if (!expect_value) malformed(line, "missing ',' between cells");
        cells.push_back(tok.text);
        expect_value = false;
      } else {
        malformed(line, "unexpected brace");
      }
    }
    if (t.empty()) continue;
    if (expect_value) malformed(line, "trailing ','");
    if (cells.size() != attrs.size()) {
      malformed(line, "row has " + std::to_string(cells.size()) + " values, expected " +
                          std::to_string(attrs.size()));
    }
    std::vector<double> row(cells.size() - 1);
    for (std::size_t a = 0; a + 1 < cells.size(); ++a) {
      if (cells[a] == "?") malformed(line, "missing values are not supported");
      const auto v = parse_double(cells[a]);
      if (!v) malformed(line, "'" + cells[a] + "' is not a number");
      row[a] = *v;
    }
    const auto& classes = ds.class_names;
    const auto it = std::find(classes.begin(), classes.end(), cells.back());
    if (it == classes.end()) malformed(line, "class value '" + cells.back() + "' is not declared");
    ds.X.push_row(row);
    ds.y.push_back(static_cast<int>(it - classes.begin()));
  }
  if (!in_data) {
    if (attrs.empty() || !attrs.back().nominal) {
      throw Error(ErrorKind::MissingClassAttribute, "no nominal class attribute declared");
    }
    malformed(line, "missing @data section");
  }
  return ds;
}

LabeledDataset read_arff(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_arff(in);
}

// ---------------------------------------------------------------------------
// CSV

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv(const LabeledDataset& ds, std::ostream& out) {
  ds.validate();
  for (const auto& name : ds.feature_names) out << csv_escape(name) << ',';
  out << "class\n";
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (const double v : ds.X.row(r)) out << format_double(v) << ',';
    out << csv_escape(ds.class_names[static_cast<std::size_t>(ds.y[r])]) << '\n';
  }
}

void write_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
  with_output_file(path, [&](std::ostream& out) { write_csv(ds, out); });
}

namespace {

// RFC 4180 records; quoted fields may span lines.
std::vector<std::vector<std::string>> parse_csv_records(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  auto end_record = [&] {
    if (field_started || !record.empty()) {
      record.push_back(std::move(field));
      records.push_back(std::move(record));
    }
    record.clear();
    field.clear();
    field_started = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty()) {
        throw Error(ErrorKind::CorruptFile, "line " + std::to_string(line) + ": stray quote");
      }
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      end_record();
      ++line;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw Error(ErrorKind::CorruptFile, "unterminated quoted CSV field");
  end_record();
  return records;
}

}  // namespace

LabeledDataset read_csv(std::istream& in, const std::vector<std::string>& class_names) {
  const auto records = parse_csv_records(in);
  if (records.empty()) throw Error(ErrorKind::CorruptFile, "CSV has no header row");
  const auto& header = records.front();
  if (header.empty() || lower(header.back()) != "class") {
    throw Error(ErrorKind::MissingClassAttribute, "last CSV column must be 'class'");
  }
  LabeledDataset ds;
  ds.feature_names.assign(header.begin(), header.end() - 1);
  ds.class_names = class_names;
  ds.X = Matrix(0, ds.feature_names.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "record " + std::to_string(r + 1);
    if (rec.size() != header.size()) {
      throw Error(ErrorKind::CorruptFile, where + ": has " + std::to_string(rec.size()) +
                                              " fields, expected " + std::to_string(header.size()));
    }
    std::vector<double> row(rec.size() - 1);
    for (std::size_t c = 0; c + 1 < rec.size(); ++c) {
      const auto v = parse_double(rec[c]);
      if (!v) throw Error(ErrorKind::CorruptFile, where + ": '" + rec[c] + "' is not a number");
      row[c] = *v;
    }
    auto it = std::find(ds.class_names.begin(), ds.class_names.end(), rec.back());
    if (it == ds.class_names.end()) {
      if (!class_names.empty()) {
        throw Error(ErrorKind::CorruptFile, where + ": unknown class '" + rec.back() + "'");
      }
      ds.class_names.push_back(rec.back());
      it = ds.class_names.end() - 1;
    }
    ds.X.push_row(row);
    ds.y.push_back(static_cast<int>(it - ds.class_names.begin()));
  }
  return ds;
}

LabeledDataset read_csv(const std::filesystem::path& path,
                        const std::vector<std::string>& class_names) {
  auto in = open_input(path);
  return read_csv(in, class_names);
}

LabeledDataset read_dataset(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".arff") return read_arff(path);
  if (ext == ".csv") return read_csv(path);
  throw Error(ErrorKind::UnsupportedFormat, path.string() + ": expected a .arff or .csv file");
}

}  // namespace seedlab::io

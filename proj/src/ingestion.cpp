#include "gcnet/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "gcnet/error.hpp"

namespace gcnet {

void PriceSeries::validate() const {
  if (dates.size() != closes.size()) throw InputError(market_id + ": dates/closes length mismatch");
  for (std::size_t k = 0; k < dates.size(); ++k) {
    if (k > 0 && dates[k] <= dates[k - 1]) {
      throw InputError(market_id + ": dates not strictly increasing at " + dates[k].iso());
    }
    if (!std::isfinite(closes[k]) || closes[k] <= 0.0) {
      throw InputError(market_id + ": non-positive price on " + dates[k].iso());
    }
  }
}

PriceSeries PriceSeries::slice(Date from, Date to) const {
  PriceSeries out{market_id, currency, {}, {}};
  auto lo = std::lower_bound(dates.begin(), dates.end(), from);
  auto hi = std::lower_bound(dates.begin(), dates.end(), to);
  auto a = static_cast<std::size_t>(lo - dates.begin());
  auto b = static_cast<std::size_t>(hi - dates.begin());
  out.dates.assign(dates.begin() + a, dates.begin() + b);
  out.closes.assign(closes.begin() + a, closes.begin() + b);
  return out;
}

PricePanel parse_prices(std::istream& in, const PriceCsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("price file is empty");
  auto header = csv::split(line);

  std::size_t date_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == schema.date_column) date_col = c;
  }
  if (date_col == header.size()) throw InputError("price file has no '" + schema.date_column + "' column");

  std::vector<std::size_t> cols;
  PricePanel panel;
  std::set<std::string> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == date_col) continue;
    std::string id(header[c]);
    if (id.empty()) throw InputError("price file has an unnamed column");
    if (!seen.insert(id).second) throw InputError("duplicate market column '" + id + "'");
    if (!schema.markets.empty() &&
        std::find(schema.markets.begin(), schema.markets.end(), id) == schema.markets.end()) {
      continue;
    }
    cols.push_back(c);
    PriceSeries s;
    s.market_id = id;
    if (auto it = schema.currency.find(id); it != schema.currency.end()) s.currency = it->second;
    panel.push_back(std::move(s));
  }
  for (const auto& m : schema.markets) {
    if (!seen.contains(m)) throw InputError("price file has no column for market '" + m + "'");
  }

  std::size_t row = 0;
  std::optional<Date> prev;
  while (std::getline(in, line)) {
    ++row;
    if (csv::trim(line).empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() != header.size()) {
      throw InputError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    }
    Date date;
    try {
      date = Date::parse(fields[date_col]);
    } catch (const InputError& e) {
      throw InputError("row " + std::to_string(row) + ": " + e.what());
    }
    if (prev && date == *prev) throw InputError("duplicate date " + date.iso() + " at row " + std::to_string(row));
    if (prev && date < *prev) throw InputError("dates out of order at row " + std::to_string(row));
    prev = date;

    for (std::size_t k = 0; k < cols.size(); ++k) {
      auto cell = fields[cols[k]];
      if (cell.empty() || cell == "NA") continue;
      auto v = csv::parse_double(cell);
      if (!v) throw InputError("row " + std::to_string(row) + ": unparseable price '" + std::string(cell) + "'");
      if (!std::isfinite(*v) || *v <= 0.0) {
        throw InputError("non-positive price at row " + std::to_string(row) + " (" + panel[k].market_id + ")");
      }
      panel[k].dates.push_back(date);
      panel[k].closes.push_back(*v);
    }
  }
  return panel;
}

PricePanel load_prices(const std::string& path, const PriceCsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open price file " + path);
  return parse_prices(in, schema);
}

void write_prices(std::ostream& out, const PricePanel& panel) {
  std::set<Date> all;
  for (const auto& s : panel) all.insert(s.dates.begin(), s.dates.end());
  out << "date";
  for (const auto& s : panel) out << ',' << s.market_id;
  out << '\n';
  std::vector<std::size_t> cursor(panel.size(), 0);
  for (Date d : all) {
    out << d.iso();
    for (std::size_t k = 0; k < panel.size(); ++k) {
      out << ',';
      const auto& s = panel[k];
      if (cursor[k] < s.size() && s.dates[cursor[k]] == d) {
        out << csv::fmt(s.closes[cursor[k]]);
        ++cursor[k];
      }
    }
    out << '\n';
  }
}

void FxSeries::validate() const {
  if (pair.size() != 6) throw InputError("fx pair '" + pair + "' is not BASEQUOTE");
  for (std::size_t k = 0; k < dates.size(); ++k) {
    if (k > 0 && dates[k] <= dates[k - 1]) throw InputError(pair + ": fx dates not strictly increasing");
    if (!std::isfinite(rates[k]) || rates[k] <= 0.0) throw InputError(pair + ": non-positive fx rate on " + dates[k].iso());
  }
}

std::map<std::string, FxSeries> parse_fx(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("fx file is empty");
  auto header = csv::split(line);
  if (header.size() != 3 || header[0] != "date" || header[1] != "pair" || header[2] != "rate") {
    throw InputError("fx file header must be date,pair,rate");
  }
  std::map<std::string, FxSeries> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (csv::trim(line).empty()) continue;
    auto f = csv::split(line);
    if (f.size() != 3) throw InputError("fx row " + std::to_string(row) + ": expected 3 fields");
    Date d;
    try {
      d = Date::parse(f[0]);
    } catch (const InputError& e) {
      throw InputError("fx row " + std::to_string(row) + ": " + e.what());
    }
    auto rate = csv::parse_double(f[2]);
    if (!rate) throw InputError("fx row " + std::to_string(row) + ": unparseable rate");
    auto& s = out[std::string(f[1])];
    s.pair = std::string(f[1]);
    if (!s.dates.empty() && d <= s.dates.back()) {
      throw InputError("fx row " + std::to_string(row) + ": duplicate or out-of-order date for " + s.pair);
    }
    s.dates.push_back(d);
    s.rates.push_back(*rate);
  }
  for (const auto& [pair, s] : out) s.validate();
  return out;
}

std::map<std::string, FxSeries> load_fx(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open fx file " + path);
  return parse_fx(in);
}

const FxSeries& find_usd_pair(const std::map<std::string, FxSeries>& fx, const std::string& currency) {
  if (auto it = fx.find(currency + "USD"); it != fx.end()) return it->second;
  if (auto it = fx.find("USD" + currency); it != fx.end()) return it->second;
  throw InputError("no fx series for " + currency + " against USD");
}

namespace {

// Multiplier turning one unit of `currency` into USD at a given rate.
double usd_factor(const FxSeries& fx, const std::string& currency, double rate) {
  if (fx.base() == currency && fx.quote() == "USD") return rate;
  if (fx.base() == "USD" && fx.quote() == currency) return 1.0 / rate;
  throw InputError("fx pair " + fx.pair + " does not quote " + currency + " against USD");
}

UsdConversion convert_impl(const PriceSeries& series, const FxSeries& fx) {
  UsdConversion out;
  out.series.market_id = series.market_id;
  out.series.currency = "USD";
  if (series.currency == "USD") {
    out.series = series;
    return out;
  }
  std::size_t j = 0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Date d = series.dates[k];
    while (j < fx.dates.size() && fx.dates[j] < d) ++j;
    if (j < fx.dates.size() && fx.dates[j] == d) {
      out.series.dates.push_back(d);
      out.series.closes.push_back(series.closes[k] * usd_factor(fx, series.currency, fx.rates[j]));
    } else {
      out.dropped.push_back(d);
    }
  }
  return out;
}

}  // namespace

PriceSeries convert_to_usd(const PriceSeries& series, const FxSeries& fx) {
  auto r = convert_impl(series, fx);
  if (!r.dropped.empty()) {
    std::string msg = series.market_id + ": fx " + fx.pair + " missing dates:";
    for (std::size_t k = 0; k < r.dropped.size() && k < 20; ++k) msg += " " + r.dropped[k].iso();
    if (r.dropped.size() > 20) msg += " ... (" + std::to_string(r.dropped.size()) + " total)";
    throw InputError(msg);
  }
  return std::move(r.series);
}

UsdConversion convert_to_usd_dropping(const PriceSeries& series, const FxSeries& fx) {
  return convert_impl(series, fx);
}

// ---------------------------------------------------------------------------

void MarketClock::validate() const {
  if (epochs.empty()) throw InputError(market_id + ": no closing-hour epochs");
  for (std::size_t k = 0; k < epochs.size(); ++k) {
    const auto& e = epochs[k];
    if (e.to < e.from) throw InputError(market_id + ": epoch ends before it starts");
    if (e.local_close_minutes < 0 || e.effective_close_minutes() >= 1440) {
      throw InputError(market_id + ": closing time outside the day");
    }
    if (k > 0 && e.from != epochs[k - 1].to + 1) {
      throw InputError(market_id + ": epochs must be contiguous (gap or overlap at " + e.from.iso() + ")");
    }
  }
}

bool MarketClock::covers(Date date) const {
  return !epochs.empty() && date >= epochs.front().from && date <= epochs.back().to;
}

const ClockEpoch& MarketClock::epoch_for(Date date) const {
  auto it = std::upper_bound(epochs.begin(), epochs.end(), date,
                             [](Date d, const ClockEpoch& e) { return d < e.from; });
  if (it == epochs.begin() || date > std::prev(it)->to) {
    throw DomainError(market_id + ": no closing-hour epoch covers " + date.iso());
  }
  return *std::prev(it);
}

UtcMinute utc_close_instant(const MarketClock& clock, Date date, const TzDatabase& tz) {
  const auto& epoch = clock.epoch_for(date);
  return tz.zone(clock.timezone_id).to_utc(date, epoch.effective_close_minutes());
}

namespace {

// Tokenizer for the metadata format: words, quoted strings, and { } = , symbols.
class MetaLexer {
 public:
  explicit MetaLexer(std::string_view text) : text_(text) {}

  struct Token {
    enum Kind { kWord, kString, kSymbol, kEnd } kind;
    std::string value;
    int line;
  };

  Token next() {
    skip();
    if (pos_ >= text_.size()) return {Token::kEnd, "", line_};
    char c = text_[pos_];
    if (c == '{' || c == '}' || c == '=' || c == ',') {
      ++pos_;
      return {Token::kSymbol, std::string(1, c), line_};
    }
    if (c == '"') {
      auto end = text_.find('"', pos_ + 1);
      if (end == std::string_view::npos) throw InputError(where() + "unterminated string");
      std::string v(text_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return {Token::kString, v, line_};
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           std::string_view("{}=,\"#").find(text_[pos_]) == std::string_view::npos) {
      ++pos_;
    }
    return {Token::kWord, std::string(text_.substr(start, pos_ - start)), line_};
  }

  std::string where() const { return "metadata line " + std::to_string(line_) + ": "; }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

int parse_hhmm(const std::string& s, const MetaLexer& lex) {
  if (s.size() != 5 || s[2] != ':') throw InputError(lex.where() + "close_local must be \"HH:MM\"");
  int h = std::stoi(s.substr(0, 2));
  int m = std::stoi(s.substr(3, 2));
  if (h < 0 || h > 23 || m < 0 || m > 59) throw InputError(lex.where() + "close_local out of range");
  return h * 60 + m;
}

ClockEpoch parse_epoch(MetaLexer& lex) {
  auto open = lex.next();
  if (open.value != "{") throw InputError(lex.where() + "expected '{' after epoch");
  ClockEpoch e;
  bool have_from = false, have_to = false, have_close = false;
  for (;;) {
    auto key = lex.next();
    if (key.kind == MetaLexer::Token::kSymbol && key.value == "}") break;
    if (key.kind == MetaLexer::Token::kSymbol && key.value == ",") continue;
    if (key.kind != MetaLexer::Token::kWord) throw InputError(lex.where() + "expected epoch field");
    if (lex.next().value != "=") throw InputError(lex.where() + "expected '=' after " + key.value);
    auto val = lex.next();
    if (key.value == "from") {
      e.from = Date::parse(val.value);
      have_from = true;
    } else if (key.value == "to") {
      e.to = Date::parse(val.value);
      have_to = true;
    } else if (key.value == "close_local") {
      e.local_close_minutes = parse_hhmm(val.value, lex);
      have_close = true;
    } else if (key.value == "auction") {
      if (val.value == "last") {
        e.auction = AuctionPolicy::kLastPrice;
      } else if (val.value == "fixed") {
        e.auction = AuctionPolicy::kPostAuctionFixed;
      } else if (val.value.rfind("window:", 0) == 0) {
        e.auction = AuctionPolicy::kPostAuctionWindow;
        e.window_minutes = std::stoi(val.value.substr(7));
        if (e.window_minutes < 0) throw InputError(lex.where() + "negative auction window");
      } else {
        throw InputError(lex.where() + "unknown auction policy '" + val.value + "'");
      }
    } else {
      throw InputError(lex.where() + "unknown epoch field '" + key.value + "'");
    }
  }
  if (!have_from || !have_to || !have_close) throw InputError(lex.where() + "epoch needs from, to and close_local");
  return e;
}

}  // namespace

ClockSet parse_market_metadata(std::string_view text) {
  ClockSet out;
  MetaLexer lex(text);
  for (;;) {
    auto tok = lex.next();
    if (tok.kind == MetaLexer::Token::kEnd) break;
    if (tok.value != "market") throw InputError(lex.where() + "expected 'market'");
    auto id = lex.next();
    if (id.kind != MetaLexer::Token::kWord && id.kind != MetaLexer::Token::kString) {
      throw InputError(lex.where() + "expected market id");
    }
    if (lex.next().value != "{") throw InputError(lex.where() + "expected '{'");
    MarketClock clock;
    clock.market_id = id.value;
    for (;;) {
      auto key = lex.next();
      if (key.kind == MetaLexer::Token::kSymbol && key.value == "}") break;
      if (key.kind == MetaLexer::Token::kEnd) throw InputError(lex.where() + "unterminated market block");
      if (key.value == "epoch") {
        clock.epochs.push_back(parse_epoch(lex));
        continue;
      }
      if (lex.next().value != "=") throw InputError(lex.where() + "expected '=' after " + key.value);
      auto val = lex.next();
      if (key.value == "timezone") {
        clock.timezone_id = val.value;
      } else if (key.value == "currency") {
        clock.currency = val.value;
      } else {
        throw InputError(lex.where() + "unknown market field '" + key.value + "'");
      }
    }
    if (clock.timezone_id.empty()) throw InputError(clock.market_id + ": missing timezone");
    if (!TzDatabase::pinned().contains(clock.timezone_id)) {
      throw InputError(clock.market_id + ": timezone '" + clock.timezone_id + "' not in the pinned database");
    }
    clock.validate();
    if (out.contains(clock.market_id)) throw InputError("duplicate market block " + clock.market_id);
    out.emplace(clock.market_id, std::move(clock));
  }
  return out;
}

ClockSet load_market_metadata(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open metadata file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_market_metadata(ss.str());
}

void write_market_metadata(std::ostream& out, const ClockSet& clocks) {
  for (const auto& [id, c] : clocks) {
    out << "market " << id << " {\n";
    out << "  timezone = \"" << c.timezone_id << "\"\n";
    out << "  currency = \"" << c.currency << "\"\n";
    for (const auto& e : c.epochs) {
      char hhmm[16];
      std::snprintf(hhmm, sizeof hhmm, "%02d:%02d", e.local_close_minutes / 60, e.local_close_minutes % 60);
      out << "  epoch { from = " << e.from.iso() << ", to = " << e.to.iso() << ", close_local = \"" << hhmm
          << "\", auction = ";
      switch (e.auction) {
        case AuctionPolicy::kLastPrice: out << "last"; break;
        case AuctionPolicy::kPostAuctionFixed: out << "fixed"; break;
        case AuctionPolicy::kPostAuctionWindow: out << "window:" << e.window_minutes; break;
      }
      out << " }\n";
    }
    out << "}\n";
  }
}

}  // namespace gcnet

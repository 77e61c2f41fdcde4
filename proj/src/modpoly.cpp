#include "osidh/modpoly.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "osidh/error.hpp"

#ifndef OSIDH_DEFAULT_MODPOLY_DIR
#define OSIDH_DEFAULT_MODPOLY_DIR "data/modpoly"
#endif

namespace osidh {

namespace {

std::string location(const std::string &origin, int line, int column)
{
    return origin + ":" + std::to_string(line) + ":" + std::to_string(column);
}

bool is_small_prime(int m)
{
    return m >= 2 && is_prime(static_cast<u64>(m));
}

}  // namespace

ModPolyDB ModPolyDB::parse(const std::string &text, const std::string &origin)
{
    std::vector<ModPolyEntry> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int max_i = -1;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos)
            continue;
        if (line[pos] != '[')
            fail(ErrorKind::ParseError, location(origin, lineno, static_cast<int>(pos) + 1) + ": expected '['");
        size_t close = line.find(']', pos);
        if (close == std::string::npos)
            fail(ErrorKind::ParseError, location(origin, lineno, static_cast<int>(line.size())) + ": missing ']'");
        std::istringstream idx(line.substr(pos + 1, close - pos - 1));
        ModPolyEntry e;
        std::string extra;
        if (!(idx >> e.i >> e.j) || (idx >> extra))
            fail(ErrorKind::ParseError, location(origin, lineno, static_cast<int>(pos) + 2) + ": expected two exponents");
        if (e.i < 0 || e.j < 0)
            fail(ErrorKind::ParseError, location(origin, lineno, static_cast<int>(pos) + 2) + ": negative exponent");
        if (e.i < e.j)
            fail(ErrorKind::ParseError, location(origin, lineno, static_cast<int>(pos) + 2) + ": entries must satisfy i >= j");
        std::istringstream rest(line.substr(close + 1));
        if (!(rest >> e.coeff) || (rest >> extra))
            fail(ErrorKind::ParseError, location(origin, lineno, static_cast<int>(close) + 2) + ": expected one coefficient");
        size_t start = (e.coeff[0] == '-' || e.coeff[0] == '+') ? 1 : 0;
        if (start == e.coeff.size() || e.coeff.find_first_not_of("0123456789", start) != std::string::npos)
            fail(ErrorKind::ParseError, location(origin, lineno, static_cast<int>(close) + 2) + ": coefficient is not a decimal integer");
        max_i = std::max(max_i, e.i);
        entries.push_back(std::move(e));
    }
    ModPolyDB db;
    if (entries.empty())
        return db;
    db.add_level(max_i - 1, std::move(entries));
    return db;
}

void ModPolyDB::add_level(int m, std::vector<ModPolyEntry> entries)
{
    std::set<std::pair<int, int>> seen;
    for (const auto &e : entries) {
        if (!seen.insert({e.i, e.j}).second)
            fail(ErrorKind::ParseError, "duplicate entry [" + std::to_string(e.i) + " " + std::to_string(e.j) +
                                            "] for level " + std::to_string(m));
    }
    _levels[m] = std::move(entries);
}

void ModPolyDB::merge(ModPolyDB other)
{
    for (auto &[m, entries] : other._levels)
        _levels[m] = std::move(entries);
}

std::vector<int> ModPolyDB::levels() const
{
    std::vector<int> out;
    for (const auto &[m, _] : _levels)
        out.push_back(m);
    return out;
}

const std::vector<ModPolyEntry> &ModPolyDB::entries(int m) const
{
    auto it = _levels.find(m);
    if (it == _levels.end())
        fail(ErrorKind::MissingLevel, "modular polynomial of level " + std::to_string(m) + " not loaded");
    return it->second;
}

std::string ModPolyDB::coeff(int m, int i, int j) const
{
    if (i < j)
        std::swap(i, j);
    for (const auto &e : entries(m)) {
        if (e.i == i && e.j == j)
            return e.coeff;
    }
    return "0";
}

void ModPolyDB::validate(int m) const
{
    const auto &es = entries(m);
    bool monic = false;
    for (const auto &e : es) {
        if (e.i > m + 1)
            fail(ErrorKind::ValidationFailed, "level " + std::to_string(m) + ": exponent exceeds m+1");
        if (e.i == m + 1 && e.j == 0)
            monic = e.coeff == "1" || e.coeff == "+1";
        if (e.i == m + 1 && e.j > 0)
            fail(ErrorKind::ValidationFailed, "level " + std::to_string(m) + ": degree in each variable must be m+1");
    }
    if (!monic)
        fail(ErrorKind::ValidationFailed, "level " + std::to_string(m) + ": coefficient of X^(m+1) must be 1");
    if (!is_small_prime(m))
        return;
    // Kronecker congruence: Phi_m(X,Y) = (X^m - Y)(X - Y^m) mod m, i.e. the only
    // nonzero residues are [m+1 0] = 1, [m m] = -1 and [1 1] = -1.
    u64 mod = static_cast<u64>(m);
    auto expected = [&](int i, int j) -> u64 {
        if (i == m + 1 && j == 0)
            return 1;
        if ((i == m && j == m) || (i == 1 && j == 1))
            return mod - 1;
        return 0;
    };
    std::set<std::pair<int, int>> present;
    for (const auto &e : es) {
        present.insert({e.i, e.j});
        if (reduce_decimal(e.coeff, mod) != expected(e.i, e.j) % mod)
            fail(ErrorKind::ValidationFailed, "level " + std::to_string(m) + ": Kronecker congruence fails at [" +
                                                  std::to_string(e.i) + " " + std::to_string(e.j) + "]");
    }
    for (auto [i, j] : {std::pair{m, m}, std::pair{1, 1}}) {
        if (!present.count({i, j}))
            fail(ErrorKind::ValidationFailed, "level " + std::to_string(m) + ": Kronecker congruence fails at missing [" +
                                                  std::to_string(i) + " " + std::to_string(j) + "]");
    }
}

ModPolyDB ModPolyDB::load(const std::filesystem::path &path)
{
    namespace fs = std::filesystem;
    auto read_file = [](const fs::path &file) {
        std::ifstream in(file);
        if (!in)
            fail(ErrorKind::ParseError, "cannot open " + file.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    ModPolyDB db;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto &entry : fs::directory_iterator(path)) {
            auto name = entry.path().filename().string();
            if (name.rfind("phi_", 0) == 0 && entry.path().extension() == ".txt")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto &file : files) {
            auto level = ModPolyDB::parse(read_file(file), file.string());
            if (level._levels.empty())
                fail(ErrorKind::MissingLevel, file.string() + " contains no entries");
            db.merge(std::move(level));
        }
    } else {
        db = ModPolyDB::parse(read_file(path), path.string());
    }
    if (db._levels.empty())
        fail(ErrorKind::MissingLevel, "no modular polynomial levels found in " + path.string());
    for (int m : db.levels())
        db.validate(m);
    return db;
}

ModPolyDB load_db(const std::filesystem::path &path)
{
    return ModPolyDB::load(path);
}

std::filesystem::path default_modpoly_dir()
{
    if (const char *env = std::getenv("OSIDH_MODPOLY_DIR"); env && *env)
        return env;
    return OSIDH_DEFAULT_MODPOLY_DIR;
}

// ---------------------------------------------------------------- ModularPolys

ModularPolys::ModularPolys(const ModPolyDB &db, std::shared_ptr<const Field> field, const std::vector<int> &levels)
    : _field(std::move(field))
{
    u64 p = _field->p();
    for (int m : levels) {
        if (_tables.count(m))
            continue;
        const auto &es = db.entries(m);
        size_t n = static_cast<size_t>(m) + 2;
        std::vector<u64> t(n * n, 0);
        for (const auto &e : es) {
            u64 c = reduce_decimal(e.coeff, p);
            t[e.i * n + e.j] = c;
            t[e.j * n + e.i] = c;
        }
        _tables.emplace(m, std::move(t));
    }
}

const std::vector<u64> &ModularPolys::table(int m) const
{
    auto it = _tables.find(m);
    if (it == _tables.end())
        fail(ErrorKind::MissingLevel, "modular polynomial of level " + std::to_string(m) + " not instantiated");
    return it->second;
}

InstantiatedModPoly ModularPolys::instantiate(int m, const Fp2 &j) const
{
    const auto &t = table(m);
    const Field *f = _field.get();
    size_t n = static_cast<size_t>(m) + 2;
    std::vector<Fp2> powers(n);
    powers[0] = f->one();
    Fp2 jj(f, j.a(), j.b());
    for (size_t i = 1; i < n; ++i)
        powers[i] = powers[i - 1] * jj;
    std::vector<Fp2> coeffs(n, f->zero());
    u64 p = f->p();
    for (size_t k = 0; k < n; ++k) {
        u128 ra = 0, rb = 0;
        u64 a = 0, b = 0;
        for (size_t i = 0; i < n; ++i) {
            u64 c = t[i * n + k];
            if (!c)
                continue;
            ra += u128{c} * powers[i].a();
            rb += u128{c} * powers[i].b();
            if ((i & 7) == 7) {
                ra %= p;
                rb %= p;
            }
        }
        a = static_cast<u64>(ra % p);
        b = static_cast<u64>(rb % p);
        coeffs[k] = Fp2(f, a, b);
    }
    return {m, jj, Poly(f, std::move(coeffs))};
}

Fp2 ModularPolys::eval_pair(int m, const Fp2 &j1, const Fp2 &j2) const
{
    return instantiate(m, j1).poly.eval(Fp2(_field.get(), j2.a(), j2.b()));
}

}  // namespace osidh

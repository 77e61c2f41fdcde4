#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "osidh/algebra.hpp"

namespace osidh {

/// One "[i j] c" entry of a classical modular polynomial, i >= j.
struct ModPolyEntry {
    int i = 0;
    int j = 0;
    std::string coeff;  // signed decimal, arbitrary length
};

/// Symmetric coefficient tables of Phi_m(X, Y), keyed by level m.
class ModPolyDB {
  public:
    ModPolyDB() = default;

    /// Loads a single phi_m.txt file or every phi_*.txt file in a directory.
    static ModPolyDB load(const std::filesystem::path &path);
    /// Parses the text of one level; the level is the X-degree minus one.
    static ModPolyDB parse(const std::string &text, const std::string &origin = "<text>");

    void add_level(int m, std::vector<ModPolyEntry> entries);
    void merge(ModPolyDB other);

    bool has(int m) const { return _levels.count(m) != 0; }
    std::vector<int> levels() const;
    const std::vector<ModPolyEntry> &entries(int m) const;
    /// Coefficient of X^i Y^j (either order) as a decimal string, "0" if absent.
    std::string coeff(int m, int i, int j) const;

    /// Throws ValidationFailed naming the failed check.
    void validate(int m) const;

  private:
    std::map<int, std::vector<ModPolyEntry>> _levels;
};

ModPolyDB load_db(const std::filesystem::path &path);
/// Default data directory: $OSIDH_MODPOLY_DIR, else the compiled-in path.
std::filesystem::path default_modpoly_dir();

struct InstantiatedModPoly {
    int level = 0;
    Fp2 pivot;
    Poly poly;  // Phi_m(pivot, Y)
};

/// Modular polynomials reduced into one field, ready for evaluation.
class ModularPolys {
  public:
    ModularPolys(const ModPolyDB &db, std::shared_ptr<const Field> field, const std::vector<int> &levels);

    const Field *field() const { return _field.get(); }
    const std::shared_ptr<const Field> &field_ptr() const { return _field; }
    bool has(int m) const { return _tables.count(m) != 0; }

    InstantiatedModPoly instantiate(int m, const Fp2 &j) const;
    Fp2 eval_pair(int m, const Fp2 &j1, const Fp2 &j2) const;

  private:
    const std::vector<u64> &table(int m) const;

    std::shared_ptr<const Field> _field;
    std::map<int, std::vector<u64>> _tables;  // row-major (m+2) x (m+2)
};

}  // namespace osidh

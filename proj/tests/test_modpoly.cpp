#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "osidh/error.hpp"
#include "osidh/modpoly.hpp"

using namespace osidh;

namespace {

const ModPolyDB &shipped()
{
    static const ModPolyDB db = load_db(OSIDH_TEST_DATA_DIR);
    return db;
}

ErrorKind parse_error(const std::string &text)
{
    try {
        auto db = ModPolyDB::parse(text);
        if (db.levels().empty())
            fail(ErrorKind::MissingLevel, "empty");
        db.validate(db.levels().front());
    } catch (const Error &e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("shipped levels load and validate")
{
    auto levels = shipped().levels();
    for (int m : {2, 3, 5, 7, 11, 13})
        CHECK(std::find(levels.begin(), levels.end(), m) != levels.end());
    CHECK(shipped().coeff(2, 2, 2) == "-1");
    CHECK(shipped().coeff(2, 1, 1) == "40773375");
    CHECK(shipped().coeff(2, 3, 0) == "1");
}

TEST_CASE("malformed inputs")
{
    CHECK(parse_error("") == ErrorKind::MissingLevel);
    CHECK(parse_error("[1 2] 5\n") == ErrorKind::ParseError);
    CHECK(parse_error("[2 1 5\n") == ErrorKind::ParseError);
    CHECK(parse_error("[2 1] 5x\n") == ErrorKind::ParseError);
    // Wrong coefficient at [1 1] breaks the congruence mod 2.
    CHECK(parse_error("[3 0] 1\n[2 2] -1\n[1 1] 40773376\n") == ErrorKind::ValidationFailed);

    try {
        ModPolyDB::parse("# header\n[2 1] 5\n[0 q] 1\n", "t.txt");
        CHECK(false);
    } catch (const Error &e) {
        CHECK(std::string(e.what()).find("t.txt:3:") == 0);
    }

    auto dir = std::filesystem::temp_directory_path() / "osidh_empty_modpoly";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "phi_2.txt") << "# nothing\n";
    bool missing = false;
    try {
        load_db(dir / "phi_2.txt");
    } catch (const Error &e) {
        missing = e.kind() == ErrorKind::MissingLevel;
    }
    CHECK(missing);
}

TEST_CASE("instantiation over F_71")
{
    auto F = Field::make(71);
    const Field *f = F.get();
    ModularPolys mp(shipped(), F, {2, 3, 5, 7, 11, 13});

    auto phi2 = mp.instantiate(2, f->zero());
    CHECK(phi2.poly.degree() == 3);
    CHECK(phi2.poly == Poly::from_roots(f, {f->from_int(40), f->from_int(40), f->from_int(40)}));

    auto phi7 = mp.instantiate(7, f->zero());
    CHECK(phi7.poly.degree() == 8);
    CHECK(phi7.poly.eval(f->zero()).is_zero());

    CHECK(mp.eval_pair(2, f->zero(), f->from_int(40)).is_zero());
    CHECK(!mp.eval_pair(2, f->zero(), f->one()).is_zero());
    auto r = roots_in_fp2(mp.instantiate(2, f->from_int(40)).poly);
    CHECK(r == std::vector<Fp2>{f->zero(), f->from_int(17), f->from_int(48)});

    bool missing = false;
    try {
        ModularPolys(shipped(), F, {2}).instantiate(3, f->zero());
    } catch (const Error &e) {
        missing = e.kind() == ErrorKind::MissingLevel;
    }
    CHECK(missing);
}

TEST_CASE("symmetry and degree on random points")
{
    auto F = Field::make(1000003);
    ModularPolys mp(shipped(), F, {2, 3, 5, 7, 11, 13});
    std::mt19937_64 rng(5);
    for (int it = 0; it < 1000; ++it) {
        int m = std::vector<int>{2, 3, 5, 7, 11, 13}[it % 6];
        Fp2 a = F->random(rng), b = F->random(rng);
        CHECK(mp.eval_pair(m, a, b) == mp.eval_pair(m, b, a));
        CHECK(mp.instantiate(m, a).poly.degree() == m + 1);
    }
}

TEST_CASE("Kronecker congruence over F_m on random points")
{
    // Reduce Phi_m into F_{m^2} and compare with (x^m - y)(x - y^m) at random points.
    for (int m : {5, 7, 11, 13}) {
        auto F = Field::make(static_cast<u64>(m));
        ModularPolys mp(shipped(), F, {m});
        std::mt19937_64 rng(static_cast<u64>(m));
        for (int it = 0; it < 50; ++it) {
            Fp2 x = F->random(rng), y = F->random(rng);
            Fp2 want = (x.pow(static_cast<u64>(m)) - y) * (x - y.pow(static_cast<u64>(m)));
            CHECK(mp.eval_pair(m, x, y) == want);
        }
    }
}

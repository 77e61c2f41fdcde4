#include "osidh/wire.hpp"

#include <charconv>

#include "osidh/error.hpp"

namespace osidh::wire {

namespace {

// Field accessors that report the JSON pointer of whatever is wrong.
class Reader {
  public:
    Reader(const Json &doc, std::string where) : _doc(doc), _where(std::move(where)) {}

    [[noreturn]] void malformed(const std::string &what) const
    {
        fail(ErrorKind::Malformed, (_where.empty() ? "/" : _where) + ": " + what);
    }

    const Json &doc() const { return _doc; }
    const std::string &where() const { return _where; }

    Reader at(const std::string &key) const
    {
        if (!_doc.is_object())
            malformed("expected an object");
        auto it = _doc.find(key);
        if (it == _doc.end())
            fail(ErrorKind::Malformed, _where + "/" + key + ": missing");
        return {*it, _where + "/" + key};
    }

    Reader at(size_t i) const { return {_doc.at(i), _where + "/" + std::to_string(i)}; }

    size_t array_size() const
    {
        if (!_doc.is_array())
            malformed("expected an array");
        return _doc.size();
    }

    void expect_keys(std::initializer_list<std::string_view> keys) const
    {
        if (!_doc.is_object())
            malformed("expected an object");
        for (const auto &[k, v] : _doc.items()) {
            bool known = false;
            for (auto key : keys)
                known |= key == k;
            if (!known)
                fail(ErrorKind::Malformed, _where + "/" + k + ": unexpected key");
        }
    }

    i64 integer() const
    {
        if (!_doc.is_number_integer())
            malformed("expected an integer");
        return _doc.get<i64>();
    }

    bool boolean() const
    {
        if (!_doc.is_boolean())
            malformed("expected a boolean");
        return _doc.get<bool>();
    }

    std::string string() const
    {
        if (!_doc.is_string())
            malformed("expected a string");
        return _doc.get<std::string>();
    }

    /// Canonical signed decimal in a string.
    i64 decimal() const
    {
        auto s = string();
        i64 v = 0;
        auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || end != s.data() + s.size() || s.empty() || std::to_string(v) != s)
            malformed("expected a canonical decimal integer");
        return v;
    }

    u64 udecimal() const
    {
        auto s = string();
        u64 v = 0;
        auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || end != s.data() + s.size() || s.empty() || std::to_string(v) != s)
            malformed("expected a canonical non-negative decimal integer");
        return v;
    }

    Fp2 element(const Field *field) const
    {
        auto s = string();
        Fp2 x;
        try {
            x = field->parse(s);
        } catch (const Error &e) {
            malformed(e.what());
        }
        if (x.to_string() != s)
            malformed("field element \"" + s + "\" is not in canonical form");
        return x;
    }

    std::vector<Fp2> elements(const Field *field) const
    {
        std::vector<Fp2> out;
        for (size_t i = 0, n = array_size(); i < n; ++i)
            out.push_back(at(i).element(field));
        return out;
    }

  private:
    const Json &_doc;
    std::string _where;
};

Json envelope(std::string_view type)
{
    Json doc = Json::object();
    doc["osidh_v"] = kVersion;
    doc["type"] = std::string(type);
    return doc;
}

void check_envelope(const Reader &r, std::string_view type)
{
    if (r.at("osidh_v").integer() != kVersion)
        r.at("osidh_v").malformed("unsupported version");
    if (r.at("type").string() != type)
        r.at("type").malformed("expected type " + std::string(type));
}

Json elements_json(const std::vector<Fp2> &xs)
{
    Json out = Json::array();
    for (const auto &x : xs)
        out.push_back(x.to_string());
    return out;
}

u64 field_p(const std::vector<Fp2> &xs)
{
    if (xs.empty() || !xs.front().field())
        fail(ErrorKind::InvalidArgument, "cannot encode elements without a field");
    return xs.front().field()->p();
}

void check_p(const Reader &r, const PublicParams &params)
{
    u64 p = r.at("p").udecimal();
    if (p != params.field.p)
        fail(ErrorKind::InvariantViolation,
             "message is over p = " + std::to_string(p) + ", parameters use p = " + std::to_string(params.field.p));
}

Json chain_body(const ModularChain &chain)
{
    Json doc = Json::object();
    doc["p"] = std::to_string(field_p(chain.j));
    doc["ell"] = chain.ell;
    doc["j"] = elements_json(chain.j);
    return doc;
}

ModularChain chain_from(const Reader &r, const Field *field)
{
    ModularChain chain;
    chain.ell = static_cast<u64>(r.at("ell").integer());
    chain.j = r.at("j").elements(field);
    if (chain.j.empty())
        r.at("j").malformed("empty chain");
    return chain;
}

}  // namespace

std::string dump(const Json &doc) { return doc.dump(); }

Json parse(std::string_view text)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        fail(ErrorKind::Malformed, std::string("/: invalid JSON: ") + e.what());
    }
}

Json encode_table(const DirectionTable &table)
{
    Json doc = Json::object();
    doc["v"] = kVersion;
    doc["ell"] = table.ell;
    Json primes = Json::array();
    for (const auto &dir : table.primes) {
        Json d = Json::object();
        d["q"] = dir.q;
        d["depth"] = dir.depth;
        Json entries = Json::array();
        for (const auto &[key, image] : dir.images) {
            Json e = Json::object();
            e["prefix"] = elements_json(key.first);
            e["sign"] = key.second;
            e["image"] = elements_json(image);
            entries.push_back(std::move(e));
        }
        d["entries"] = std::move(entries);
        Json collisions = Json::array();
        for (const auto &c : dir.collisions)
            collisions.push_back(elements_json(c));
        d["collisions"] = std::move(collisions);
        primes.push_back(std::move(d));
    }
    doc["primes"] = std::move(primes);
    return doc;
}

DirectionTable decode_table(const Json &doc, const Field *field, const std::string &where)
{
    Reader r(doc, where);
    r.expect_keys({"v", "ell", "primes"});
    if (r.at("v").integer() != kVersion)
        r.at("v").malformed("unsupported table version");
    DirectionTable table;
    table.ell = static_cast<u64>(r.at("ell").integer());
    auto primes = r.at("primes");
    for (size_t i = 0, n = primes.array_size(); i < n; ++i) {
        auto d = primes.at(i);
        d.expect_keys({"q", "depth", "entries", "collisions"});
        PrimeDirections dir;
        dir.q = static_cast<u64>(d.at("q").integer());
        dir.depth = static_cast<int>(d.at("depth").integer());
        auto entries = d.at("entries");
        for (size_t k = 0, m = entries.array_size(); k < m; ++k) {
            auto e = entries.at(k);
            e.expect_keys({"prefix", "sign", "image"});
            int sign = static_cast<int>(e.at("sign").integer());
            if (sign != 1 && sign != -1)
                e.at("sign").malformed("sign must be 1 or -1");
            auto key = std::pair{e.at("prefix").elements(field), sign};
            if (!dir.images.emplace(std::move(key), e.at("image").elements(field)).second)
                e.malformed("duplicate prefix");
        }
        auto collisions = d.at("collisions");
        for (size_t k = 0, m = collisions.array_size(); k < m; ++k)
            dir.collisions.push_back(collisions.at(k).elements(field));
        table.primes.push_back(std::move(dir));
    }
    return table;
}

Json encode(const PublicParams &P)
{
    Json doc = envelope("PublicParams");
    doc["p"] = std::to_string(P.field.p);
    doc["nonresidue"] = std::to_string(P.field.d);
    doc["disc"] = P.disc;
    doc["ell"] = P.ell;
    doc["n"] = P.n;
    doc["r"] = P.r;
    doc["seed"] = std::to_string(P.seed);
    doc["allow_collisions"] = P.allow_collisions;
    doc["chain"] = elements_json(P.chain.j);
    Json primes = Json::array();
    for (const auto &I : P.primes) {
        Json q = Json::object();
        q["q"] = I.q;
        q["lambda"] = I.lambda;
        q["lambda_bar"] = I.lambda_bar;
        q["a"] = std::to_string(I.a);
        q["b"] = std::to_string(I.b);
        primes.push_back(std::move(q));
    }
    doc["primes"] = std::move(primes);
    doc["table"] = encode_table(P.table);
    doc["warnings"] = P.warnings;
    return doc;
}

PublicParams decode_params(const Json &doc, const ModPolyDB &db)
{
    Reader r(doc, "");
    r.expect_keys({"osidh_v", "type", "p", "nonresidue", "disc", "ell", "n", "r", "seed", "allow_collisions", "chain",
                   "primes", "table", "warnings"});
    check_envelope(r, "PublicParams");
    PublicParams P;
    P.field.p = r.at("p").udecimal();
    P.field.d = r.at("nonresidue").udecimal();
    if (!is_prime(P.field.p) || P.field.p < 5 || P.field.p >= kMaxCharacteristic)
        fail(ErrorKind::InvariantViolation, "p = " + std::to_string(P.field.p) + " is not a supported prime");
    if (!(create_field(P.field.p) == P.field))
        fail(ErrorKind::InvariantViolation, "nonresidue does not match p");
    P.F = Field::make(P.field.p);
    const Field *field = P.F.get();
    P.disc = r.at("disc").integer();
    P.ell = static_cast<u64>(r.at("ell").integer());
    P.n = static_cast<int>(r.at("n").integer());
    P.r = r.at("r").integer();
    P.seed = r.at("seed").udecimal();
    P.allow_collisions = r.at("allow_collisions").boolean();
    P.chain.ell = P.ell;
    P.chain.j = r.at("chain").elements(field);
    auto primes = r.at("primes");
    for (size_t i = 0, n = primes.array_size(); i < n; ++i) {
        auto q = primes.at(i);
        q.expect_keys({"q", "lambda", "lambda_bar", "a", "b"});
        SplitPrimeIdeal I;
        I.q = static_cast<u64>(q.at("q").integer());
        I.lambda = static_cast<u64>(q.at("lambda").integer());
        I.lambda_bar = static_cast<u64>(q.at("lambda_bar").integer());
        I.a = q.at("a").decimal();
        I.b = q.at("b").decimal();
        P.primes.push_back(I);
    }
    P.table = decode_table(r.at("table").doc(), field, "/table");
    auto warnings = r.at("warnings");
    for (size_t i = 0, n = warnings.array_size(); i < n; ++i)
        P.warnings.push_back(warnings.at(i).string());
    try {
        bind_and_validate(P, db);
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::MissingLevel)
            throw;
        if (e.kind() != ErrorKind::InvariantViolation)
            fail(ErrorKind::InvariantViolation, e.what());
        throw;
    }
    return P;
}

Json encode(const ModularChain &chain)
{
    Json doc = envelope("ModularChain");
    doc.update(chain_body(chain));
    return doc;
}

ModularChain decode_chain(const Json &doc, const PublicParams &params)
{
    Reader r(doc, "");
    r.expect_keys({"osidh_v", "type", "p", "ell", "j"});
    check_envelope(r, "ModularChain");
    check_p(r, params);
    auto chain = chain_from(r, params.F.get());
    if (chain.ell != params.ell || chain.length() != params.n)
        fail(ErrorKind::InvariantViolation, "chain has the wrong degree or length for these parameters");
    validate_chain(*params.mp, chain, params.j0());
    return chain;
}

Json encode(const SecretKey &sk)
{
    Json doc = envelope("SecretKey");
    doc["e"] = sk.e;
    return doc;
}

SecretKey decode_key(const Json &doc, const PublicParams &params)
{
    Reader r(doc, "");
    r.expect_keys({"osidh_v", "type", "e"});
    check_envelope(r, "SecretKey");
    SecretKey sk;
    auto e = r.at("e");
    for (size_t i = 0, n = e.array_size(); i < n; ++i)
        sk.e.push_back(e.at(i).integer());
    validate_key(params, sk);
    return sk;
}

Json encode(const PublicData &data)
{
    Json doc = envelope("PublicData");
    doc["p"] = std::to_string(field_p({data.end}));
    doc["end"] = data.end.to_string();
    Json fwd = Json::array(), bwd = Json::array();
    for (const auto &c : data.forward)
        fwd.push_back(elements_json(c));
    for (const auto &c : data.backward)
        bwd.push_back(elements_json(c));
    doc["forward"] = std::move(fwd);
    doc["backward"] = std::move(bwd);
    return doc;
}

PublicData decode_public_data(const Json &doc, const PublicParams &params)
{
    Reader r(doc, "");
    r.expect_keys({"osidh_v", "type", "p", "end", "forward", "backward"});
    check_envelope(r, "PublicData");
    check_p(r, params);
    const Field *field = params.F.get();
    PublicData data;
    data.end = r.at("end").element(field);
    for (auto [key, out] : {std::pair{"forward", &data.forward}, std::pair{"backward", &data.backward}}) {
        auto dirs = r.at(key);
        for (size_t i = 0, n = dirs.array_size(); i < n; ++i)
            out->push_back(dirs.at(i).elements(field));
    }
    validate_public_data(params, data);
    return data;
}

Json encode(const SharedSecret &secret)
{
    Json doc = envelope("SharedSecret");
    doc["p"] = std::to_string(field_p({secret.j}));
    doc["j"] = secret.j.to_string();
    return doc;
}

SharedSecret decode_secret(const Json &doc, const PublicParams &params)
{
    Reader r(doc, "");
    r.expect_keys({"osidh_v", "type", "p", "j"});
    check_envelope(r, "SharedSecret");
    check_p(r, params);
    return {r.at("j").element(params.F.get())};
}

Json encode(const OrderClass &cls)
{
    Json doc = Json::object();
    doc["a"] = std::to_string(cls.a());
    doc["b"] = std::to_string(cls.b());
    doc["ell"] = cls.params().ell;
    doc["n"] = cls.depth();
    doc["disc"] = cls.params().disc;
    return doc;
}

Json encode(const AttackTranscript &t)
{
    auto classes = [](const std::vector<OrderClass> &xs) {
        Json out = Json::array();
        for (const auto &x : xs)
            out.push_back(encode(x));
        return out;
    };
    Json doc = envelope("AttackTranscript");
    Json levels = Json::array();
    for (const auto &level : t.levels) {
        Json l = Json::object();
        l["depth"] = level.depth;
        l["skipped"] = level.skipped;
        l["bound"] = level.bound;
        l["tested"] = classes(level.tested);
        l["survivors"] = classes(level.survivors);
        l["unrepresented"] = classes(level.unrepresented);
        levels.push_back(std::move(l));
    }
    doc["levels"] = std::move(levels);
    doc["recovered"] = encode(t.recovered);
    doc["alternatives"] = classes(t.alternatives);
    doc["exponents"] = t.exponents ? Json(*t.exponents) : Json(nullptr);
    doc["act_calls"] = t.act_calls;
    return doc;
}

OrderClass decode_class(const Json &doc)
{
    Reader r(doc, "");
    r.expect_keys({"a", "b", "ell", "n", "disc"});
    i64 a = r.at("a").decimal(), b = r.at("b").decimal();
    OrderClass cls;
    try {
        auto P = OrderParams::make(r.at("disc").integer(), static_cast<u64>(r.at("ell").integer()));
        cls = OrderClass::from_element(P, static_cast<int>(r.at("n").integer()), a, b);
    } catch (const Error &e) {
        fail(ErrorKind::InvariantViolation, e.what());
    }
    if (static_cast<i64>(cls.a()) != a || static_cast<i64>(cls.b()) != b)
        fail(ErrorKind::InvariantViolation, "class representative is not canonical");
    return cls;
}

}  // namespace osidh::wire

#include <doctest.h>

#include <fstream>
#include <functional>
#include <sstream>

#include "indescent/certificate.hpp"
#include "indescent/parser.hpp"
#include "indescent/search.hpp"

#include "mutation_suite.hpp"

using namespace indescent;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ParsedFile load(const std::string& name) { return parse_system(slurp(std::string(TEST_DATA_DIR) + "/" + name)); }

struct Golden {
    ParsedFile pf;
    ProofCertificate cert;
};

Golden golden(const std::string& name) {
    Golden g{load(name), {}};
    Strategy strat(Strategy::default_regex());
    QueryOptions opt;
    auto out = prove_query(g.pf.system, g.pf.queries[0], strat, opt);
    REQUIRE(out.kind == QueryOutcome::Kind::Proved);
    g.cert = make_certificate(g.pf.system, g.pf.queries[0], strat.source(), *out.proof);
    REQUIRE(check_proof(g.pf.system, g.cert).valid());
    return g;
}

} // namespace

TEST_CASE("emitted certificates round-trip through text and re-check") {
    for (const char* name : {"fol_pq.sys", "sl_ls.sys"}) {
        Golden g = golden(name);
        std::string text = write_certificate(g.cert);
        ProofCertificate back = read_certificate(g.pf.system, text);
        CHECK(check_proof(g.pf.system, back).valid());
        CHECK(write_certificate(back) == text); // serialization is stable
    }
}

TEST_CASE("a certificate is rejected against a different system") {
    Golden g = golden("fol_pq.sys");
    auto other = load("fol_nonfilter.sys");
    auto res = check_proof(other.system, g.cert);
    CHECK(res.kind == CheckResult::Kind::DigestMismatch);
}

TEST_CASE("every single-node mutation is pinpointed and rejected") {
    size_t applied_total = 0, rejected_total = 0;

    auto run_suite = [&](const std::string& name) {
        Golden g = golden(name);
        auto mutations = indescent::testing::standard_mutations();

        for (const auto& [label, mutate] : mutations) {
            ProofCertificate m = g.cert;
            if (!mutate(m)) continue;
            ++applied_total;
            CheckResult res = check_proof(g.pf.system, m);
            INFO(name << ": mutation '" << label << "' -> " << res.str());
            CHECK_FALSE(res.valid());
            if (!res.valid()) ++rejected_total;
            if (res.kind == CheckResult::Kind::Invalid) CHECK(res.node_id >= 0);
        }
    };

    run_suite("fol_pq.sys");
    run_suite("sl_ls.sys");

    CHECK(applied_total >= 20);
    CHECK(rejected_total == applied_total);
}

TEST_CASE("certificates crossing text form stay bit-identical") {
    Golden g = golden("fol_pq.sys");
    std::string t1 = write_certificate(g.cert);
    std::string t2 = write_certificate(read_certificate(g.pf.system, t1));
    CHECK(t1 == t2);
}

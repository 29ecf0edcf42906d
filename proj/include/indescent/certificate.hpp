#pragma once

#include <optional>
#include <string>

#include "indescent/proof.hpp"
#include "indescent/search.hpp"

namespace indescent {

// Self-contained proof certificate: system digest, root query and the node
// table with rule labels, structured sequents, children, backlinks and full
// witness data. Checkable without re-running the search.
struct CertificateNode {
    int id = 0;
    int parent = -1;
    RuleLabel rule = RuleLabel::AX;
    Sequent sequent;
    std::vector<int> children;
    RuleWitness witness;
    int pivot_id = -1; // ID nodes only
};

struct ProofCertificate {
    std::string digest;
    EntailmentQuery query;
    std::string strategy;
    std::vector<CertificateNode> nodes; // preorder, ids equal indices
};

std::string system_digest(const InductiveSystem& sys);

ProofCertificate make_certificate(const InductiveSystem& sys, const EntailmentQuery& q, const std::string& strategy,
                                  const ProofNode& proof);

std::string write_certificate(const ProofCertificate& cert);
ProofCertificate read_certificate(const InductiveSystem& sys, const std::string& text);

struct CheckResult {
    enum class Kind { Valid, Invalid, DigestMismatch } kind = Kind::Valid;
    int node_id = -1;
    std::string description;

    bool valid() const { return kind == Kind::Valid; }
    std::string str() const;
};

CheckResult check_proof(const InductiveSystem& sys, const ProofCertificate& cert);

} // namespace indescent

#ifndef JOINTSLAB_SETSYS_HPP
#define JOINTSLAB_SETSYS_HPP

#include <optional>
#include <vector>

namespace jointslab {

// Sorted, 1-based ground elements.
using Set = std::vector<int>;

struct JointSetSystem {
    std::vector<unsigned> k;
    std::vector<unsigned> m;
    unsigned delta = 0;
    unsigned ground = 0;
    std::vector<Set> J;               // (d+delta)-sets
    std::vector<std::vector<Set>> F;  // F[i] holds (d+delta-k_i)-sets
    bool multiset = false;            // allow repeated members in F

    unsigned d() const;
    unsigned s() const;
    std::size_t classes() const { return k.size(); }
};

constexpr unsigned kMaxGround = 256;

// Checks parameters, set sizes, element ranges and duplicates.
void validate_system(const JointSetSystem& sys);

struct Member {
    std::size_t cls = 0;
    std::size_t idx = 0;
    friend bool operator==(const Member&, const Member&) = default;
};

// m_i members of each class i, grouped by class.
using Selection = std::vector<Member>;

bool certifies(const JointSetSystem& sys, const Set& P, const Selection& sel);

// Every certifying selection of P (unordered within a class), up to `limit`.
std::vector<Selection> certifying_selections(const JointSetSystem& sys, const Set& P,
                                             std::size_t limit = static_cast<std::size_t>(-1));

struct SystemVerification {
    bool ok = false;
    std::vector<std::optional<Selection>> certificates;
    std::vector<std::size_t> uncertified;
};

SystemVerification verify_system(const JointSetSystem& sys, unsigned threads = 1);

// Named constructions.
JointSetSystem construction_2_3();
JointSetSystem construction_kkk(unsigned k);
JointSetSystem construction_be();
JointSetSystem tight_system(unsigned M, unsigned d);
// (2;3;0) with J = {[6]} and F = all 4-subsets of [6].
JointSetSystem pair_partition_system();
// Multiset tight construction: m_i * k_i! * (d-k_i)! copies of every (d-k_i)-subset of [M].
JointSetSystem first_mult_multiset(unsigned M, const std::vector<unsigned>& k, const std::vector<unsigned>& m);
// (1;d;0): central joint {1..d} plus N further joints on each of its lines.
JointSetSystem star_system(unsigned d, unsigned N);

// Each ground element becomes n copies; every set becomes all its copy choices.
JointSetSystem blow_up(const JointSetSystem& sys, unsigned n);

// |J|/prod |F_i|^{m_i/(s-1)} agrees for both systems (checked as an integer identity).
bool same_joint_ratio(const JointSetSystem& a, const JointSetSystem& b);

}  // namespace jointslab

#endif

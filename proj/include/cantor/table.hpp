// Finite-stage approximations of continuous maps: a monotone table from
// input words to output words at a fixed depth. The table backend exists so
// nowhere-open behavior can be exercised and decomposed at desk scale even
// where no machine map exhibits it.

#ifndef CANTOR_TABLE_HPP
#define CANTOR_TABLE_HPP

#include <map>
#include <optional>

#include "cantor/decompose.hpp"
#include "cantor/transducer.hpp"
#include "cantor/word.hpp"

namespace cantor {

class FiniteStageMap {
  public:
    /// `domain_stems` empty means the full space. Throws SemanticError on a
    /// non-monotone table or an entry outside the domain.
    FiniteStageMap(unsigned depth, std::map<Word, Word> entries,
                   std::vector<Word> domain_stems = {});

    unsigned depth() const { return depth_; }
    const std::vector<Word>& leaves() const { return leaves_; }
    const std::map<Word, Word>& entries() const { return entries_; }
    const std::vector<Word>& domain_stems() const { return domain_stems_; }

    bool in_domain(const Word& w) const;  // [w] meets the domain
    /// Effective output: entry at the deepest listed ancestor of w.
    Word output(const Word& w) const;

    /// Distinct leaf outputs, sorted.
    std::vector<Word> image_values() const;
    /// Leaves whose output is comparable with v (could map into [v]).
    std::vector<Word> preimage_leaves(const Word& v) const;
    /// Leaves whose output equals v exactly.
    std::vector<Word> exact_preimage_leaves(const Word& v) const;

    bool injective_at_stage() const;  // leaf outputs pairwise distinct

  private:
    unsigned depth_;
    std::map<Word, Word> entries_;
    std::vector<Word> domain_stems_;
    std::vector<Word> leaves_;  // sorted length-`depth_` domain words
};

/// Truncations agree at depth j (on the letters both outputs determine).
bool outputs_close(const Word& a, const Word& b, unsigned j);

/// Is the restriction of the table to the leaf set `part` open at stage
/// depth j? Tests every substem's image bundle for adherence from the rest.
bool table_restriction_open(const FiniteStageMap& t, const std::vector<Word>& part, unsigned j);

NowhereOpenVerdict table_check_nowhere_open(const FiniteStageMap& t,
                                            const std::vector<Word>& z_leaves, unsigned depth);

struct TableDecompositionPiece {
    Word stem;
    std::vector<Word> leaves;
};

struct TableDecompositionResult {
    std::vector<TableDecompositionPiece> pieces;
    std::vector<Word> residual;
    DecompositionStatus status = DecompositionStatus::FullyDecomposed;
    std::optional<NowhereOpenVerdict> residual_verdict;
};

TableDecompositionResult table_decompose(const FiniteStageMap& t, unsigned budget_depth,
                                         unsigned budget_rounds, unsigned stage_depth);

}  // namespace cantor

#endif

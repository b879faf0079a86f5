"""Failure bits reported per triple by ``check_batch``."""

BRAID = 1
HECKE = 2
COMMUTE = 4
TWISTED = 8
DIAG_RANK = 16
COMMUTATION_FALSE = 32
COMMUTATION_DISAGREE = 64
NONDEGENERATE = 128
RANK = 256

NAMES = {
    BRAID: "braid",
    HECKE: "hecke",
    COMMUTE: "commute",
    TWISTED: "twisted_relations",
    DIAG_RANK: "diagonal_rank",
    COMMUTATION_FALSE: "commutation_conditions",
    COMMUTATION_DISAGREE: "commutation_disagreement",
    NONDEGENERATE: "forms_nondegenerate",
    RANK: "skewsymmetrizer_rank",
}

# bits that count as a failure of the commutation theorem
THEOREM_BITS = BRAID | HECKE | COMMUTE | TWISTED | COMMUTATION_FALSE | COMMUTATION_DISAGREE | NONDEGENERATE | RANK


def describe(flags: int) -> list[str]:
    return [name for bit, name in NAMES.items() if flags & bit]

"""Tuple-count kernel for representation spaces (numpy version).

A problem is encoded as a small program.  Each generator ``a`` has a list
of candidate matrices ``mats[offs[a]:offs[a] + radix[a]]``, zero-padded
to ``D x D``.  Tuple number ``c`` picks candidates by mixed radix with
generator 0 most significant.  Relation ``r`` is the signed sum of terms
``rel_start[r]:rel_start[r + 1]``; term ``t`` has field coefficient
``term_coef[t]`` and word ``term_arrows[term_start[t]:term_start[t + 1]]``
(generator positions, first arrow first).  Mode 0 asks for the zero
matrix, mode 1 for zero trace.
"""

import numpy as np

from .. import _fieldops as fo


def count_tuples_numpy(prog, t, lo, hi, block=1 << 16):
    mats, offs, radix = prog["mats"], prog["offs"], prog["radix"]
    A = len(radix)
    count = 0
    for start in range(lo, hi, block):
        codes = np.arange(start, min(start + block, hi), dtype=np.int64)
        choice = np.empty((len(codes), A), dtype=np.int64)
        rest = codes.copy()
        for a in range(A - 1, -1, -1):
            choice[:, a] = rest % radix[a]
            rest //= radix[a]
        picked = [mats[offs[a] + choice[:, a]] for a in range(A)]
        ok = np.ones(len(codes), dtype=bool)
        for r in range(len(prog["rel_mode"])):
            acc = np.zeros((len(codes),) + mats.shape[1:], dtype=np.int64)
            for tt in range(prog["rel_start"][r], prog["rel_start"][r + 1]):
                word = prog["term_arrows"][prog["term_start"][tt]:prog["term_start"][tt + 1]]
                prod = picked[word[0]]
                for b in word[1:]:
                    prod = fo.matmul(t, picked[b], prod)
                acc = t.add[acc, t.mul[prog["term_coef"][tt], prod]]
            if prog["rel_mode"][r] == 1:
                tr = np.zeros(len(codes), dtype=np.int64)
                for i in range(acc.shape[1]):
                    tr = t.add[tr, acc[:, i, i]]
                ok &= tr == 0
            else:
                ok &= ~np.any(acc != 0, axis=(1, 2))
        count += int(ok.sum())
    return count

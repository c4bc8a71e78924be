"""Pure-Python kernels; reference implementations for the compiled core.

Both backends share these conventions:

- agents are dense integer indices into a CSR adjacency (indptr/indices);
- thresholds are exact rationals, compared cross-multiplied so only integer
  arithmetic happens in the loops;
- ``join[a]`` is the first path position at which agent ``a`` behaves, or -1
  if it never does;
- an agent with an empty neighborhood never adopts (the threshold fraction
  is undefined for it).
"""


def diffusion(indptr, indices, num, den, strict, initial, join):
    """Fill ``join`` and return the fixed-point position.

    Synchronous threshold adoption from the initial set.  Adoption is
    monotone, so a frontier propagation suffices: an agent's behaving
    count only changes when a neighbor newly adopts.
    """
    n = len(join)
    for a in range(n):
        join[a] = 0 if initial[a] else -1

    # num == 0 with the inclusive comparison is satisfied by every agent
    # that has a neighborhood, behaving neighbors or not.
    if num == 0 and not strict:
        fixed = 0
        for a in range(n):
            if join[a] == -1 and indptr[a + 1] > indptr[a]:
                join[a] = 1
                fixed = 1
        return fixed

    count = [0] * n
    touched_flag = bytearray(n)
    frontier = [a for a in range(n) if initial[a]]
    fixed = 0
    while frontier:
        touched = []
        for b in frontier:
            for k in range(indptr[b], indptr[b + 1]):
                a = indices[k]
                count[a] += 1
                if join[a] == -1 and not touched_flag[a]:
                    touched_flag[a] = 1
                    touched.append(a)
        adopters = []
        for a in touched:
            touched_flag[a] = 0
            deg = indptr[a + 1] - indptr[a]
            lhs = count[a] * den
            rhs = num * deg
            if lhs > rhs if strict else lhs >= rhs:
                adopters.append(a)
        if not adopters:
            break
        fixed += 1
        for a in adopters:
            join[a] = fixed
        frontier = adopters
    return fixed


# Row opcodes, mirrored by the compiled core.
OP_TOP = 0
OP_CONST = 1  # precomputed truth value (neighborhood atoms)
OP_BEH = 2
OP_NOT = 3
OP_AND = 4
OP_NEXT = 5
OP_UNTIL = 6
OP_MAJ = 7


def label_rows(op, arg1, arg2, rows, n_pos, join, indptr, indices, num, den, strict):
    """Fill one truth row per subformula and return the visit count.

    Rows arrive children-first: ``arg1``/``arg2`` are row indices for the
    connectives, an agent index for behavior and majority rows, a constant
    for neighborhood rows.  Exactly one visit is counted per (row, position)
    fill; the until rows need a single backward pass because the last
    position repeats forever.
    """
    visits = 0
    last = n_pos - 1
    for r in range(len(op)):
        row = rows[r]
        code = op[r]
        if code == OP_TOP:
            for i in range(n_pos):
                row[i] = 1
        elif code == OP_CONST:
            v = arg1[r]
            for i in range(n_pos):
                row[i] = v
        elif code == OP_BEH:
            j = join[arg1[r]]
            for i in range(n_pos):
                row[i] = 1 if (j != -1 and j <= i) else 0
        elif code == OP_NOT:
            child = rows[arg1[r]]
            for i in range(n_pos):
                row[i] = 1 - child[i]
        elif code == OP_AND:
            left = rows[arg1[r]]
            right = rows[arg2[r]]
            for i in range(n_pos):
                row[i] = left[i] & right[i]
        elif code == OP_NEXT:
            child = rows[arg1[r]]
            for i in range(last):
                row[i] = child[i + 1]
            row[last] = child[last]  # the tail position repeats
        elif code == OP_UNTIL:
            left = rows[arg1[r]]
            right = rows[arg2[r]]
            row[last] = right[last]
            for i in range(last - 1, -1, -1):
                row[i] = 1 if right[i] else (left[i] & row[i + 1])
        elif code == OP_MAJ:
            a = arg1[r]
            deg = indptr[a + 1] - indptr[a]
            adds = [0] * n_pos
            for k in range(indptr[a], indptr[a + 1]):
                j = join[indices[k]]
                if j != -1:
                    adds[j] += 1
            cnt = 0
            for i in range(n_pos):
                cnt += adds[i]
                lhs = cnt * den
                rhs = num * deg
                ok = lhs > rhs if strict else lhs >= rhs
                row[i] = 1 if (deg > 0 and ok) else 0
        else:
            raise ValueError(f"unknown opcode {code}")
        visits += n_pos
    return visits

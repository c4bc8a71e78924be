# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; semantics mirror _pure.py exactly.

The shim guarantees threshold numerator/denominator fit in 32 bits, so the
cross-multiplied comparisons below stay inside 64-bit range (count and degree
are bounded by the agent count, itself a 32-bit index).
"""

from libc.stdlib cimport calloc, free


cdef enum:
    OP_TOP = 0
    OP_CONST = 1
    OP_BEH = 2
    OP_NOT = 3
    OP_AND = 4
    OP_NEXT = 5
    OP_UNTIL = 6
    OP_MAJ = 7


def diffusion(const int[::1] indptr, const int[::1] indices,
              long long num, long long den, bint strict,
              const unsigned char[::1] initial, int[::1] join):
    cdef Py_ssize_t n = join.shape[0]
    cdef Py_ssize_t i, k, t
    cdef int a, b, fixed = 0
    cdef long long lhs, rhs, deg
    cdef long long* count = NULL
    cdef unsigned char* touched_flag = NULL
    cdef int* frontier = NULL
    cdef int* touched = NULL
    cdef Py_ssize_t frontier_len = 0, touched_len, adopters_len

    for i in range(n):
        join[i] = 0 if initial[i] else -1

    if num == 0 and not strict:
        for i in range(n):
            if join[i] == -1 and indptr[i + 1] > indptr[i]:
                join[i] = 1
                fixed = 1
        return fixed

    if n == 0:
        return 0
    count = <long long*> calloc(n, sizeof(long long))
    touched_flag = <unsigned char*> calloc(n, 1)
    frontier = <int*> calloc(n, sizeof(int))
    touched = <int*> calloc(n, sizeof(int))
    if count == NULL or touched_flag == NULL or frontier == NULL or touched == NULL:
        free(count); free(touched_flag); free(frontier); free(touched)
        raise MemoryError()

    try:
        for i in range(n):
            if initial[i]:
                frontier[frontier_len] = <int> i
                frontier_len += 1
        while frontier_len > 0:
            touched_len = 0
            for t in range(frontier_len):
                b = frontier[t]
                for k in range(indptr[b], indptr[b + 1]):
                    a = indices[k]
                    count[a] += 1
                    if join[a] == -1 and touched_flag[a] == 0:
                        touched_flag[a] = 1
                        touched[touched_len] = a
                        touched_len += 1
            # adopters overwrite the frontier in place; reads are done
            adopters_len = 0
            for t in range(touched_len):
                a = touched[t]
                touched_flag[a] = 0
                deg = indptr[a + 1] - indptr[a]
                lhs = count[a] * den
                rhs = num * deg
                if (lhs > rhs) if strict else (lhs >= rhs):
                    frontier[adopters_len] = a
                    adopters_len += 1
            if adopters_len == 0:
                break
            fixed += 1
            for t in range(adopters_len):
                join[frontier[t]] = fixed
            frontier_len = adopters_len
    finally:
        free(count)
        free(touched_flag)
        free(frontier)
        free(touched)
    return fixed


def label_rows(const int[::1] op, const int[::1] arg1, const int[::1] arg2,
               list rows, Py_ssize_t n_pos, const int[::1] join,
               const int[::1] indptr, const int[::1] indices,
               long long num, long long den, bint strict):
    cdef long long visits = 0
    cdef Py_ssize_t last = n_pos - 1
    cdef Py_ssize_t r, i, k
    cdef int code, j, a
    cdef long long lhs, rhs, deg, cnt
    cdef unsigned char[::1] row, child, left, right
    cdef long long* adds = NULL

    for r in range(op.shape[0]):
        row = rows[r]
        code = op[r]
        if code == OP_TOP:
            for i in range(n_pos):
                row[i] = 1
        elif code == OP_CONST:
            for i in range(n_pos):
                row[i] = <unsigned char> arg1[r]
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
            row[last] = child[last]
        elif code == OP_UNTIL:
            left = rows[arg1[r]]
            right = rows[arg2[r]]
            row[last] = right[last]
            for i in range(last - 1, -1, -1):
                row[i] = 1 if right[i] else (left[i] & row[i + 1])
        elif code == OP_MAJ:
            a = arg1[r]
            deg = indptr[a + 1] - indptr[a]
            adds = <long long*> calloc(n_pos, sizeof(long long))
            if adds == NULL:
                raise MemoryError()
            try:
                for k in range(indptr[a], indptr[a + 1]):
                    j = join[indices[k]]
                    if j != -1:
                        adds[j] += 1
                cnt = 0
                rhs = num * deg
                for i in range(n_pos):
                    cnt += adds[i]
                    lhs = cnt * den
                    if deg > 0 and ((lhs > rhs) if strict else (lhs >= rhs)):
                        row[i] = 1
                    else:
                        row[i] = 0
            finally:
                free(adds)
                adds = NULL
        else:
            raise ValueError(f"unknown opcode {code}")
        visits += n_pos
    return visits

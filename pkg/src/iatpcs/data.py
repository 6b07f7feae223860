"""Embedded mouse-mortality record (radiation experiment, male mice).

Cause 1 is reticulum cell sarcoma, cause 2 thymic lymphoma. The 25 rows are
a progressively censored sample from ``n = 77`` units with ``m = 25``,
``R_1 = ... = R_24 = 2`` and ``R_25 = 4``.
"""

HOEL_ROWS = (
    (40, 2), (42, 2), (62, 2), (163, 2), (179, 2), (206, 2), (222, 2), (228, 2),
    (252, 2), (259, 2), (318, 1), (385, 2), (407, 2), (420, 2), (462, 2), (507, 2),
    (517, 2), (524, 2), (525, 1), (528, 1), (536, 1), (605, 1), (612, 1), (620, 2),
    (621, 1),
)
HOEL_N = 77
HOEL_M = 25
HOEL_REMOVALS = (2,) * 24 + (4,)

# Summary figures quoted alongside this record in the literature do not
# follow from the rows (e.g. only 4 cause-1 deaths precede 600, not 7);
# analyses report what the rows imply.
HOEL_NOTE = (
    "note: published summaries of this record (D1=7, D2=14, A=6996 at t1=450, t2=600) "
    "are not reproducible from the listed rows; values above are computed from the rows."
)

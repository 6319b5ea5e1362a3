"""Small shared inputs for the validity and acceptance tests."""

FOUR_POINTS = ([(0, 0), (0, 1), (10, 0), (10, 1)], [0, 0, 1, 1])

# (points, labels); all compared without normalisation
VALIDITY_CASES = [
    FOUR_POINTS,
    ([(0, 0), (1, 0), (0, 1), (5, 5), (6, 5), (9, 0), (9, 1)], [0, 0, 0, 1, 1, 2, 2]),
    ([(1.5, 2.0, 0.1), (1.7, 2.2, 0.0), (4.0, 1.0, 3.3), (4.2, 0.8, 3.0), (3.9, 1.1, 2.8),
      (0.0, 5.0, 1.0)], [1, 1, 0, 0, 0, 2]),
    ([(0.0,), (0.4,), (1.0,), (3.0,), (3.5,), (7.0,), (7.2,), (7.3,)], [0, 0, 0, 1, 1, 2, 2, 2]),
    ([(2, 3), (2, 4), (3, 3), (8, 8), (8, 9), (1, 9), (2, 9), (9, 1)], [0, 0, 0, 1, 1, 2, 2, 1]),
]

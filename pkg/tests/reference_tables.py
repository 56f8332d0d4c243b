"""Published object sizes (bytes), keyed by load.

Each row: N -> (TDM mss=1460, H2 mss=1460, TDM mss=536, H2 mss=536).
"""

TABLES = {
    0.01: {
        2: (1470, 736, 540, 270),
        3: (1473, 738, 541, 271),
        4: (1476, 739, 542, 271),
        5: (1480, 741, 543, 272),
        6: (1483, 743, 545, 273),
        7: (1487, 745, 546, 274),
        8: (1491, 747, 547, 274),
        9: (1495, 749, 549, 275),
        "mean": (1482, 742, 544, 273),
    },
    0.05: {
        2: (1512, 761, 555, 279),
        3: (1529, 771, 561, 283),
        4: (1550, 784, 569, 288),
        5: (1568, 795, 576, 292),
        6: (1594, 813, 585, 298),
        7: (1608, 819, 590, 301),
        8: (1626, 830, 597, 305),
        9: (1652, 848, 607, 311),
        "mean": (1580, 803, 580, 295),
    },
    0.1: {
        2: (1572, 799, 577, 293),
        3: (1615, 831, 593, 305),
        4: (1657, 858, 608, 315),
        5: (1703, 890, 625, 327),
        6: (1744, 917, 640, 337),
        7: (1811, 979, 665, 359),
        8: (1947, 1143, 715, 420),
        9: (1947, 1118, 715, 411),
        "mean": (1750, 942, 642, 346),
    },
}

# column order of every row tuple
COLUMNS = (("tdm", 1460), ("h2", 1460), ("tdm", 536), ("h2", 536))


def entries():
    """Yield (load, N, mss, model_tag, theta) for the 96 per-N cells."""
    for load, table in TABLES.items():
        for n, row in table.items():
            if n == "mean":
                continue
            for (model, mss), theta in zip(COLUMNS, row):
                yield load, n, mss, model, theta


def mean_entries():
    for load, table in TABLES.items():
        for (model, mss), theta in zip(COLUMNS, table["mean"]):
            yield load, mss, model, theta

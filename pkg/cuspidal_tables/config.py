"""
Configuration constants and settings for Cuspidal Tables
"""

import os

# Default settings
DEFAULT_LOG_FILE = "cuspidal_tables.log"
DEFAULT_JOBS = max(1, min(8, os.cpu_count() or 1))

# Embedded catalog
CATALOG_PATH = os.path.join(os.path.dirname(__file__), "data", "catalog.json")
CATALOG_VERSION = "1.3"

# Group enumeration
ENUMERATION_BOUND = 10**6
LARGE_ENUMERATION_BOUND = 3 * 10**6
ENUMERATION_CHUNK = 20000

# Seeded random-word search for elements with a prescribed characteristic polynomial
WORD_SEARCH_SEED = 20240612
WORD_SEARCH_ATTEMPTS = 200000
WORD_SEARCH_MAX_LENGTH = 40

# Cyclotomic factorization of characteristic polynomials
MAX_CYCLOTOMIC_INDEX = 60

# Exponent options --s1 .. --s9 of the bfun command
MAX_S_OPTIONS = 9

# Orders of the Weyl groups of the supported types
WEYL_GROUP_ORDERS = {
    "A1": 2,
    "G2": 12,
    "D4": 192,
    "F4": 1152,
    "E6": 51840,
    "E7": 2903040,
    "E8": 696729600,
}

# Coxeter numbers, the order of a Coxeter element
COXETER_NUMBERS = {
    "G2": 6,
    "D4": 6,
    "F4": 12,
    "E6": 12,
    "E7": 18,
    "E8": 30,
}

# Grid used by the exhaustive (G2, 3s) nilpotent-orbit check
G2_ORBIT_GRID = (-2, -1, 0, 1, 2)
G2_POINT_COUNT_PRIME = 7

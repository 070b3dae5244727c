import voluptuous as vol

METHOD_CONVEX = "convex"
METHOD_DEGREE = "degree"
METHOD_INVERSE = "inverse"
METHOD_AFFINE = "affine"
DEFAULT_METHOD = METHOD_DEGREE

MOO_METHODS: list[str] = [METHOD_CONVEX, METHOD_DEGREE, METHOD_INVERSE, METHOD_AFFINE]

MOO_METHOD_SCHEMA = vol.Schema(vol.In(MOO_METHODS))

# Exclusion subdivision caps for unique_zero
DEFAULT_ZERO_MAX_BOXES = 4096
DEFAULT_ZERO_EXTRA_LEVELS = 64

# Largest radius tried first when searching lower bounds of the modulus of openness: 2^LOWER_SEARCH_START
LOWER_SEARCH_START = 8

# Bits kept by interval enclosures in existence-box checks
MIRANDA_PRECISION = 40

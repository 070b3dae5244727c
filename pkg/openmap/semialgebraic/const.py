# Deepest block whose undecided cell balls are certified by quantifier elimination
SA_QE_MAX_LEVEL = 2

# Extra subdivision levels when certifying a ball inside a set by interval evaluation
SA_SUBDIVISION_DEPTH = 4

# Names of the variables in the openness formula: radius, image point, preimage point
RADIUS_NAME = "s"
IMAGE_PREFIX = "y"
PREIMAGE_PREFIX = "u"

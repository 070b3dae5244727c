"""Constants for the openmap package."""

import voluptuous as vol

from openmap.openness.const import DEFAULT_METHOD, MOO_METHODS

DOMAIN = "openmap"

# Budget config keys
CONF_MAX_PREFIX = "max_prefix"
CONF_MAX_DEPTH = "max_depth"
CONF_MAX_PRECISION = "max_precision"

# Budget defaults (balls read, subdivision depth, bits)
DEFAULT_MAX_PREFIX = 512
DEFAULT_MAX_DEPTH = 8
DEFAULT_MAX_PRECISION = 30

# Quantifier elimination limits
CONF_MAX_VARS = "max_vars"
CONF_MAX_DEGREE = "max_degree"
CONF_MAX_PROJECTION = "max_projection"
DEFAULT_MAX_VARS = 4
DEFAULT_MAX_DEGREE = 4
DEFAULT_MAX_PROJECTION = 64

# Bits read beyond k by modulus realizers
DEFAULT_LOOKAHEAD = 6

# Prefix schedule for derived enumerations: block t reads at most PREFIX_STEP * 2^t balls
PREFIX_STEP = 16

# Job config keys
CONF_COMMAND = "command"
CONF_FUNCTION = "function"
CONF_FORMULA = "formula"
CONF_SET = "set"
CONF_DOMAIN = "domain"
CONF_POINT = "x"
CONF_TARGET = "y"
CONF_BALL = "ball"
CONF_BOUND = "bound"
CONF_K = "k"
CONF_METHOD = "method"
CONF_OUTPUT = "output"
CONF_FORMAT = "format"

FORMAT_JSON = "json"
FORMAT_CSV = "csv"
DEFAULT_FORMAT = FORMAT_JSON

DEFAULT_K = 2

# Domain assumed for preimage jobs when none is given
DEFAULT_DOMAIN_RADIUS = 1024

COMMANDS: list[str] = [
    "preimage",
    "image",
    "moc",
    "moo",
    "moo-lower",
    "inverse-radius",
    "invert",
    "zero",
    "eval-from-image",
    "qe",
    "sa-enum",
    "sa-moo",
    "regular-image",
    "cover-check",
]

# Exit codes
EXIT_OK = 0
EXIT_PARSE_ERROR = 2
EXIT_REFUSED = 3
EXIT_NOT_YET = 4

BUDGET_SCHEMA = vol.Schema({
    vol.Optional(CONF_MAX_PREFIX, default=DEFAULT_MAX_PREFIX): vol.All(int, vol.Range(min=0)),
    vol.Optional(CONF_MAX_DEPTH, default=DEFAULT_MAX_DEPTH): vol.All(int, vol.Range(min=0)),
    vol.Optional(CONF_MAX_PRECISION, default=DEFAULT_MAX_PRECISION): vol.All(int, vol.Range(min=0)),
})

LIMITS_SCHEMA = vol.Schema({
    vol.Optional(CONF_MAX_VARS, default=DEFAULT_MAX_VARS): vol.All(int, vol.Range(min=1, max=8)),
    vol.Optional(CONF_MAX_DEGREE, default=DEFAULT_MAX_DEGREE): vol.All(int, vol.Range(min=1, max=12)),
    vol.Optional(CONF_MAX_PROJECTION, default=DEFAULT_MAX_PROJECTION): vol.All(int, vol.Range(min=1)),
})

# Set and domain inputs are inline JSON text, a path to a JSON file, or (in job files) the JSON object itself
JOB_SCHEMA = vol.Schema({
    vol.Required(CONF_COMMAND): vol.In(COMMANDS),
    vol.Optional(CONF_FUNCTION): str,
    vol.Optional(CONF_FORMULA): str,
    vol.Optional(CONF_SET): vol.Any(str, dict),
    vol.Optional(CONF_DOMAIN): vol.Any(str, dict),
    vol.Optional(CONF_POINT): str,
    vol.Optional(CONF_TARGET): str,
    vol.Optional(CONF_BALL): str,
    vol.Optional(CONF_BOUND): str,
    vol.Optional(CONF_K, default=DEFAULT_K): vol.All(int, vol.Range(min=0)),
    vol.Optional(CONF_METHOD, default=DEFAULT_METHOD): vol.In(MOO_METHODS),
    vol.Optional(CONF_OUTPUT, default=None): vol.Any(None, str),
    vol.Optional(CONF_FORMAT, default=DEFAULT_FORMAT): vol.In([FORMAT_JSON, FORMAT_CSV]),
}).extend(BUDGET_SCHEMA.schema)

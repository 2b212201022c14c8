"""Default techno-economic parameters.

All values can be overridden per scenario file; these are the study
defaults.  Units: power GW, energy GWh, money MEUR, distances km,
specific prices EUR/MWh unless noted.
"""

# capital recovery
INTEREST_OWP = 0.06
LIFETIME_OWP = 27  # a
INTEREST_HVDC = 0.05
LIFETIME_HVDC = 40  # a

# offshore wind parks
C_OWP_VARP = 2.4  # MEUR/MW installed
C_OWP_VAROM = 0.0625  # share of capex per year
OWP_DENSITY_MW_KM2 = 7.0

# HVDC cables and converters
C_B_FIX = 0.7  # MEUR per built connection
C_B_ON_VARL = 4.5  # MEUR/km, onshore cable share
C_B_OFF_VARL = 2.0  # MEUR/km, offshore cable share
C_B_ON_VARLP = 1.0  # MEUR/(km GW)
C_B_OFF_VARLP = 1.0  # MEUR/(km GW)
C_C_FIX = 30.0  # MEUR per converter pair
C_C_VARP_ACDC = 750.0  # MEUR/GW
C_C_VARP_DCDC = 125.0  # MEUR/GW (multi-terminal, 1/6 of ac-dc)
C_HVDC_VAROM = 0.01  # share of capex per year

# onshore grid reinforcement
C_NTC_VARL = 2.0  # MEUR/km per corridor buildout
C_NTC_VARLP = 1.0  # MEUR/(km GW)

# market / dispatch
NTC_STEP_GW = 1.0
LANDING_CAP_GW = 6.0
VOLL_EUR_MWH = 3000.0
CO2_PRICE_EUR_T = 53.0

FUEL_PRICES_EUR_MWH_TH = {
    "nuclear": 1.7,
    "lignite": 4.0,
    "hard_coal": 15.5,
    "natural_gas": 24.9,
    "mixed": 30.0,
    "hydro": 0.0,
}

# t CO2 per MWh thermal input
EMISSION_FACTORS_T_MWH_TH = {
    "nuclear": 0.0,
    "lignite": 0.40,
    "hard_coal": 0.34,
    "natural_gas": 0.20,
    "mixed": 0.25,
    "hydro": 0.0,
}

HYDRO_WEEK_AVAILABILITY = 0.45

# turbine power curve breakpoints, m/s
CUT_IN_MS = 3.0
RATED_MS = 12.0
CUT_OUT_MS = 25.0

# geometry
GRID_SPACING_KM = 10.0
ONSHORE_TAIL_KM = 10.0
EARTH_RADIUS_KM = 6371.0

# clustering
NRMSE_TOL = 0.10
NRMSE_NORM = "range"  # or "mean"
MAX_DIST_KM = 70.0

# solving
REL_GAP = 1e-4
NODE_LIMIT = 100000
MAX_STEPS_PER_ARC = 40
NTC_ADD_MAX_GW = 20.0

HOURS_PER_WEEK = 168
WEEKS_PER_YEAR = 52
MODEL_YEAR_H = WEEKS_PER_YEAR * HOURS_PER_WEEK  # 8736
CALENDAR_YEAR_H = 8760

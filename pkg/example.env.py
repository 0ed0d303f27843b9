# Concurrency cap for sweep and figure runs (0 = one worker per CPU)
QBATTERY_THREADS = 0

# Logging
QBATTERY_LOG_LEVEL = "INFO"

# Reference solvers
QBATTERY_VOLTERRA_MAX_STEP = 0.005
QBATTERY_VERIFY_TOLERANCE = 1e-3

# Discretised cavity bath used by `qbattery verify` when omega0 <= the limit
QBATTERY_BATH_MODES = 800
QBATTERY_BATH_HALF_WIDTH = 50.0
QBATTERY_CAVITY_TRANSIT = 40.0
QBATTERY_DISCRETE_OMEGA0_LIMIT = 100.0

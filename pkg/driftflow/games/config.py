ZERO_SUM = 'zero_sum'
COMMON_PAYOFF = 'common_payoff'
PAYOFFS = (ZERO_SUM, COMMON_PAYOFF)

# per-player rates scale the step of each player; same_time rescales both
# players onto one physical clock
STANDARD = 'standard'
SAME_TIME = 'same_time'
TIMINGS = (STANDARD, SAME_TIME)

DD_CANCEL_SIM = 'dd_cancel_sim'
DD_CANCEL_ALT = 'dd_cancel_alt'
DD_CANCEL_ALT_DISC_ONLY = 'dd_cancel_alt_disc_only'
SGA = 'sga'
CO = 'co'
STRENGTHEN_SELF = 'strengthen_self'
LOCALLY_STABLE = 'locally_stable'
ODEGAN = 'odegan'

REG_SCHEMES = (
    DD_CANCEL_SIM,
    DD_CANCEL_ALT,
    DD_CANCEL_ALT_DISC_ONLY,
    SGA,
    CO,
    STRENGTHEN_SELF,
    LOCALLY_STABLE,
    ODEGAN,
)
# schemes whose strength is the free parameter zeta
ZETA_SCHEMES = (SGA, CO, LOCALLY_STABLE, ODEGAN)

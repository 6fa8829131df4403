class MagicConfig:
    """Keyword names understood by several functions through ``**kwargs``."""

    # return a single concatenated DataFrame instead of a dict of frames
    RETURN_DF = 'return_df'
    # compute the leading Hessian eigenvalue at every recorded point
    RECORD_EIGS = 'record_eigs'
    # show a tqdm progress bar for long loops
    PROGRESS = 'progress'

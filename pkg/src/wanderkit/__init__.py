"""Real-to-sim geometry and evaluation toolkit."""

__version__ = "0.1.0"

from .geometry import (
    Pose,
    Similarity3,
    Trajectory,
    align_se3,
    align_sim3,
    apply_alignment,
    select_keyframes,
    subsample_uniform,
)
from .trajectory_metrics import (
    DatasetSummary,
    PoseMetricReport,
    aggregate,
    auc_at_30,
    evaluate_scene,
    r_ate,
    r_rte,
    scene_success,
    t_ate_raw,
    t_ate_scaled,
    t_rte,
    t_rte_deg,
)
from .meshing import (
    OccupancyGrid,
    PointCloud,
    TriangleMesh,
    crop_by_trajectory,
    extract_collision_mesh,
    filter_small_components,
    marching_cubes,
    voxelize,
)
from .splat_init import (
    CameraIntrinsics,
    DepthMap,
    GaussianSet,
    downsample_cloud,
    init_gaussians,
    knn_scales,
    opacity_from_density,
    render_depth,
)
from .navmesh import (
    NavMesh,
    Path,
    bake_navmesh,
    geodesic_distance,
    sample_endpoints,
    shortest_path,
    snap,
)
from .episode import (
    Action,
    AgentState,
    Episode,
    EpisodeLimits,
    NavReport,
    RewardConfig,
    evaluate,
    expert_policy,
    random_policy,
    reward,
    run_episode,
    step,
)
from .image_metrics import Image, psnr, ssim

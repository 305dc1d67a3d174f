// Shared with the tile service: the plane is the fixed square [-2,2]^2,
// zoom z splits it into 2^z x 2^z tiles of 256 px each.
export const TILE_SIZE = 256
export const BASE_HALF_WIDTH = 2
export const MAX_ZOOM = 24

export const DEFAULT_N = 3
export const DEFAULT_BUDGET = 500
export const ORBIT_MAX_POINTS = 200

export const DEFAULT_API_BASE = 'http://127.0.0.1:8642'

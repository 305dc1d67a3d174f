import { BASE_HALF_WIDTH, DEFAULT_BUDGET, DEFAULT_N } from './constants.js'
import type { Point, View } from './geometry.js'

export interface OverlayFlags {
    markers: boolean
    orbitV0: boolean
    orbitV1: boolean
}

export interface ExplorerState {
    n: number
    selectedLambda: Point | null
    paramView: View
    juliaView: View
    budget: number
    overlays: OverlayFlags
}

export function defaultView(): View {
    return { centerRe: 0, centerIm: 0, halfWidth: BASE_HALF_WIDTH }
}

export function defaultState(): ExplorerState {
    return {
        n: DEFAULT_N,
        selectedLambda: null,
        paramView: defaultView(),
        juliaView: defaultView(),
        budget: DEFAULT_BUDGET,
        overlays: { markers: true, orbitV0: false, orbitV1: true },
    }
}

// Selecting a parameter always resets the dynamical pane to the full window;
// the old view was framing a different Julia set.
export function withLambda(state: ExplorerState, lam: Point): ExplorerState {
    return { ...state, selectedLambda: lam, juliaView: defaultView() }
}

function viewToken(v: View): string {
    return [v.centerRe, v.centerIm, v.halfWidth].map(String).join(',')
}

function parseView(token: string | null): View | null {
    if (!token) return null
    const parts = token.split(',').map(Number)
    const [re, im, hw] = parts
    if (parts.length !== 3 || parts.some((x) => !Number.isFinite(x))) return null
    if (hw === undefined || hw <= 0) return null
    return { centerRe: re ?? 0, centerIm: im ?? 0, halfWidth: hw }
}

export function encodeFragment(state: ExplorerState): string {
    const q = new URLSearchParams()
    q.set('n', String(state.n))
    q.set('budget', String(state.budget))
    q.set('param', viewToken(state.paramView))
    q.set('julia', viewToken(state.juliaView))
    if (state.selectedLambda) {
        q.set('lambda', `${state.selectedLambda.re},${state.selectedLambda.im}`)
    }
    const flags =
        (state.overlays.markers ? 'm' : '') +
        (state.overlays.orbitV0 ? '0' : '') +
        (state.overlays.orbitV1 ? '1' : '')
    q.set('overlays', flags)
    return '#' + q.toString()
}

export function decodeFragment(fragment: string): ExplorerState {
    const state = defaultState()
    const raw = fragment.startsWith('#') ? fragment.slice(1) : fragment
    if (!raw) return state
    const q = new URLSearchParams(raw)

    const n = Number(q.get('n'))
    if (Number.isInteger(n) && n >= 2) state.n = n
    const budget = Number(q.get('budget'))
    if (Number.isInteger(budget) && budget >= 1) state.budget = budget

    state.paramView = parseView(q.get('param')) ?? state.paramView
    state.juliaView = parseView(q.get('julia')) ?? state.juliaView

    const lam = q.get('lambda')
    if (lam) {
        const [re, im] = lam.split(',').map(Number)
        if (re !== undefined && im !== undefined && Number.isFinite(re) && Number.isFinite(im)) {
            state.selectedLambda = { re, im }
        }
    }
    const flags = q.get('overlays')
    if (flags !== null) {
        state.overlays = {
            markers: flags.includes('m'),
            orbitV0: flags.includes('0'),
            orbitV1: flags.includes('1'),
        }
    }
    return state
}

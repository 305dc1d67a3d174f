const KIND_LABEL: Record<string, string> = {
    cantor_set: 'Cantor set',
    connected: 'Connected',
    cantor_bubbles: 'Cantor bubbles',
    unresolved: 'Unresolved',
}

const SUBCASE_LABEL: Record<string, string> = {
    case1: '1',
    case2: '2',
    case3a: '3a',
    case3b: '3b',
}

export function badgeText(kind: string, subcase: string): string {
    const label = KIND_LABEL[kind] ?? kind
    const sub = SUBCASE_LABEL[subcase]
    return sub ? `${label} (${sub})` : label
}
